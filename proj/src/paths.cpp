#include "kwl/paths.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace kwl {

void PathCertificate::verify(const Parameters& params) const {
  if (energies.size() != moves.size() + 1) throw std::logic_error("certificate length mismatch");
  Configuration cfg = start;
  std::set<std::string> seen;
  seen.insert(cfg.occupancy_key());
  if (cfg.energy(params) != energies[0]) throw std::logic_error("start energy mismatch");
  Energy top = energies[0];
  for (size_t i = 0; i < moves.size(); ++i) {
    if (!is_legal(cfg, moves[i])) throw std::logic_error("illegal move in certificate");
    apply_move(cfg, moves[i]);
    if (!seen.insert(cfg.occupancy_key()).second)
      throw std::logic_error("certificate revisits a configuration");
    if (cfg.energy(params) != energies[i + 1]) throw std::logic_error("energy trace mismatch");
    top = max(top, energies[i + 1]);
  }
  if (!(cfg == end)) throw std::logic_error("end configuration mismatch");
  if (barrier != top - energies[0]) throw std::logic_error("declared barrier mismatch");
}

std::string PathCertificate::to_json(const Parameters& params) const {
  nlohmann::json j;
  j["start"] = nlohmann::json::parse(start.to_json());
  j["barrier"] = barrier.str();
  nlohmann::json ms = nlohmann::json::array();
  const Domain& dom = start.domain();
  for (size_t i = 0; i < moves.size(); ++i) {
    nlohmann::json m;
    m["kind"] = move_kind_name(moves[i].kind);
    if (moves[i].kind == MoveKind::Hop) {
      const Site f = dom.site(moves[i].from);
      m["from"] = {f.x1, f.x2};
    }
    const Site t = dom.site(moves[i].to);
    m["to"] = {t.x1, t.x2};
    m["h"] = energies[i + 1].str();
    ms.push_back(m);
  }
  j["moves"] = ms;
  (void)params;
  return j.dump();
}

namespace {

// -------------------------------------------------------------------------
// Script executor. Motifs are written in a local frame: coordinates (A, B)
// are doubled-dual offsets from the moving tile's type-2, with A along the
// travel direction and B pointing away from the supporting edge.
// -------------------------------------------------------------------------

struct Frame {
  Site origin;
  // doubled-dual images of the canonical unit vectors
  int tA = 0, tB = 0;  // travel
  int nA = 0, nB = 0;  // away from support

  Site at(int A, int B) const {
    return Site::from_doubled_dual(origin.du1() + A * tA + B * nA,
                                   origin.du2() + A * tB + B * nB);
  }
  Frame advanced(int A, int B) const {
    Frame f = *this;
    f.origin = at(A, B);
    return f;
  }
  // After a turn toward the support side: travel rotates onto -n, the old
  // travel becomes the new away-from-support direction.
  Frame turned() const {
    Frame f = *this;
    f.tA = -nA;
    f.tB = -nB;
    f.nA = tA;
    f.nB = tB;
    return f;
  }
};

struct Runner {
  Configuration cfg;
  const Parameters& p;
  std::vector<Move> moves;
  std::vector<Energy> energies;

  Runner(const Configuration& start, const Parameters& params) : cfg(start), p(params) {
    energies.push_back(cfg.energy(p));
  }

  int id(const Site& s, const char* what) const {
    int i = cfg.domain().id_of(s);
    if (i < 0) throw CertificateError(std::string(what) + ": site outside the domain");
    return i;
  }

  void step(const Move& m, const char* what) {
    if (!is_legal(cfg, m)) throw CertificateError(std::string(what) + ": move not legal here");
    apply_move(cfg, m);
    moves.push_back(m);
    energies.push_back(cfg.energy(p));
  }

  void hop(const Site& from, const Site& to, const char* what) {
    step({MoveKind::Hop, id(from, what), id(to, what)}, what);
  }

  // Empty sites where a walking particle of the given type holds no bond.
  bool quiet(int site, int type) const {
    if (cfg.occ(site) != 0) return false;
    int partner = type == 1 ? 2 : 1;
    return cfg.neighbor_count(site, partner) == 0;
  }

  // Hop route between two sites through quiet cells; endpoints exempted.
  std::vector<int> route(int from, int to, int type, const char* what) const {
    const Domain& dom = cfg.domain();
    std::vector<int> prev(dom.size(), -2);
    std::queue<int> q;
    prev[from] = -1;
    q.push(from);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      if (x == to) break;
      for (int d = 0; d < 4; ++d) {
        int y = dom.neighbor(x, d);
        if (y < 0 || prev[y] != -2) continue;
        if (y != to && !quiet(y, type)) continue;
        if (y == to && cfg.occ(y) != 0) continue;
        prev[y] = x;
        q.push(y);
      }
    }
    if (prev[to] == -2)
      throw CertificateError(std::string(what) + ": no clear walking lane");
    std::vector<int> path;
    for (int x = to; x != -1; x = prev[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
  }

  // Creation at the inner boundary followed by a walk to the target site.
  void summon(int type, const Site& target, const char* what) {
    const Domain& dom = cfg.domain();
    int tid = id(target, what);
    int best = -1;
    std::vector<int> best_route;
    for (int b : dom.inner_boundary_ids()) {
      if (!quiet(b, type)) continue;
      try {
        auto r = route(b, tid, type, what);
        if (best < 0 || r.size() < best_route.size()) {
          best = b;
          best_route = std::move(r);
        }
      } catch (const CertificateError&) {
      }
    }
    if (best < 0) throw CertificateError(std::string(what) + ": no reachable boundary site");
    step({type == 1 ? MoveKind::Create1 : MoveKind::Create2, -1, best}, what);
    for (size_t i = 1; i < best_route.size(); ++i)
      step({MoveKind::Hop, best_route[i - 1], best_route[i]}, what);
  }

  // Walk a detached particle out and annihilate it.
  void dismiss(const Site& from, const char* what) {
    const Domain& dom = cfg.domain();
    int fid = id(from, what);
    int type = cfg.occ(fid);
    if (type == 0) throw CertificateError(std::string(what) + ": nothing to remove");
    int best = -1;
    std::vector<int> best_route;
    for (int b : dom.inner_boundary_ids()) {
      if (b != fid && !quiet(b, type)) continue;
      try {
        auto r = route(fid, b, type, what);
        if (best < 0 || r.size() < best_route.size()) {
          best = b;
          best_route = std::move(r);
        }
      } catch (const CertificateError&) {
      }
    }
    if (best < 0) throw CertificateError(std::string(what) + ": no exit lane");
    for (size_t i = 1; i < best_route.size(); ++i)
      step({MoveKind::Hop, best_route[i - 1], best_route[i]}, what);
    step({type == 1 ? MoveKind::Annihilate1 : MoveKind::Annihilate2, -1, best}, what);
  }

  // -1 for sites outside the domain.
  int occ_at(const Site& s) const {
    int i = cfg.domain().id_of(s);
    return i < 0 ? -1 : cfg.occ(i);
  }
  bool empty_at(const Site& s) const { return occ_at(s) == 0; }
  int bonds_at(const Site& s) const { return cfg.bonds_at(id(s, "bonds")); }

  PathCertificate finish(const Configuration& start) {
    Energy top = energies[0];
    for (const Energy& e : energies) top = max(top, e);
    Energy barrier = top - energies[0];
    return PathCertificate{start, cfg, std::move(moves), std::move(energies), barrier};
  }
};

// -------------------------------------------------------------------------
// Lane finding: cells a relocated tile can rest on, connected by straight
// slides along an edge and by turns around convex cluster corners.
// -------------------------------------------------------------------------

constexpr std::array<std::pair<int, int>, 4> kCellDirs = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

struct LaneStep {
  Cell from;
  Cell to;
  bool turn;
  std::pair<int, int> travel;   // cell delta of the travel direction
  std::pair<int, int> support;  // cell delta toward the supporting edge
};

bool support_has(const std::set<Cell>& support, Cell c) { return support.count(c) > 0; }

std::vector<LaneStep> find_lane(const std::set<Cell>& support, const Cell& from,
                                const Cell& to) {
  // BFS over (cell, incoming travel dir); straight edges need support under
  // both cells on a common side, turns pivot around a supported corner cell.
  struct Node {
    Cell cell;
    std::vector<LaneStep> path;
  };
  std::set<Cell> visited;
  std::queue<Node> q;
  q.push({from, {}});
  visited.insert(from);
  while (!q.empty()) {
    Node cur = q.front();
    q.pop();
    if (cur.cell == to) return cur.path;
    for (auto [du, dv] : kCellDirs) {
      Cell nxt{cur.cell.u + du, cur.cell.v + dv};
      // straight: shared support side perpendicular to travel
      if (!support_has(support, nxt) && !visited.count(nxt)) {
        for (auto [su, sv] : kCellDirs) {
          if (su * du + sv * dv != 0) continue;  // perpendicular only
          if (support_has(support, {cur.cell.u + su, cur.cell.v + sv}) &&
              support_has(support, {nxt.u + su, nxt.v + sv})) {
            LaneStep st{cur.cell, nxt, false, {du, dv}, {su, sv}};
            Node n{nxt, cur.path};
            n.path.push_back(st);
            visited.insert(nxt);
            q.push(n);
            break;
          }
        }
      }
      // turn: diagonal around the supported pivot at cur + supportside
      for (auto [su, sv] : kCellDirs) {
        if (su * du + sv * dv != 0) continue;
        Cell pivot{cur.cell.u + su, cur.cell.v + sv};
        Cell diag{pivot.u + du, pivot.v + dv};
        if (!support_has(support, pivot)) continue;
        if (!support_has(support, {pivot.u + su, pivot.v + sv})) continue;  // face below
        if (support_has(support, diag) || visited.count(diag)) continue;
        LaneStep st{cur.cell, diag, true, {du, dv}, {su, sv}};
        Node n{diag, cur.path};
        n.path.push_back(st);
        visited.insert(diag);
        q.push(n);
      }
    }
  }
  throw CertificateError("no lane from the mover to the target along the cluster edge");
}

Frame frame_for(const Configuration& cfg, const Cell& cell, std::pair<int, int> travel,
                std::pair<int, int> support) {
  // The tile's type-2 sits at one of the two parity positions of the cell.
  // Canonical unit vectors are half-cell doubled-dual steps: one cell of
  // travel is at(2, 0).
  Frame f;
  const Domain& dom = cfg.domain();
  for (int par = 0; par < 2; ++par) {
    Site s = Site::from_doubled_dual(2 * cell.u + par, 2 * cell.v + par);
    int id = dom.id_of(s);
    if (id >= 0 && cfg.occ(id) == 2) {
      f.origin = s;
      f.tA = travel.first;
      f.tB = travel.second;
      f.nA = -support.first;
      f.nB = -support.second;
      return f;
    }
  }
  throw CertificateError("mover cell holds no type-2 particle");
}

bool frame_matches(const Frame& f, const LaneStep& st) {
  return f.tA == st.travel.first && f.tB == st.travel.second && f.nA == -st.support.first &&
         f.nB == -st.support.second;
}

// Identify the mover's lead corner (1 active bond) at frame position (1,1),
// optionally swapping the frame orientation conventions is not needed: the
// lead is whichever of the two top corners exists with a single bond.
struct TileCorners {
  bool lead_present = false;     // at (1,1)
  bool trailer_present = false;  // at (-1,1), exactly one bond
};

TileCorners inspect(const Runner& r, const Frame& f) {
  TileCorners tc;
  Site lead = f.at(1, 1);
  Site trail = f.at(-1, 1);
  tc.lead_present = r.occ_at(lead) == 1 && r.bonds_at(lead) == 1;
  tc.trailer_present = r.occ_at(trail) == 1 && r.bonds_at(trail) == 1;
  return tc;
}

// Reattach the moved tile's companions onto its free corners: the lead takes
// the forward top corner when free, the trailer the remaining one; a
// companion with no free corner stays detached and is swept out later.
void reattach_lead(Runner& r, const Frame& f, const Site& lead_from) {
  for (const Site& cand : {f.at(3, 1), f.at(1, 1)}) {
    if (r.empty_at(cand)) {
      r.hop(lead_from, cand, "lead reattach");
      return;
    }
  }
}

// One straight slide by one cell via corner hops (method 1).
// Assumes the lead corner at (1,1); brings the trailer along when present.
void step3U_straight(Runner& r, Frame& f) {
  TileCorners tc = inspect(r, f);
  if (!tc.lead_present) throw CertificateError("dimer lead corner missing or multiply bonded");
  r.hop(f.at(1, 1), f.at(2, 2), "lead swing");
  r.hop(f.at(0, 0), f.at(1, 1), "tile transit");
  r.hop(f.at(1, 1), f.at(2, 0), "tile landing");
  reattach_lead(r, f, f.at(2, 2));
  if (tc.trailer_present && r.empty_at(f.at(1, 1))) {
    r.hop(f.at(-1, 1), f.at(0, 2), "trailer swing");
    r.hop(f.at(0, 2), f.at(1, 1), "trailer reattach");
  }
  f = f.advanced(2, 0);
}

// Turn around the convex corner toward the support side (method 1).
void step3U_turn(Runner& r, Frame& f) {
  TileCorners tc = inspect(r, f);
  if (!tc.lead_present) throw CertificateError("dimer lead corner missing or multiply bonded");
  r.hop(f.at(1, 1), f.at(2, 2), "lead swing");
  r.hop(f.at(0, 0), f.at(1, 1), "tile transit");
  r.hop(f.at(1, 1), f.at(2, 0), "tile at the corner");
  r.hop(f.at(2, 2), f.at(3, 1), "lead follows");
  r.hop(f.at(3, 1), f.at(4, 0), "lead around");
  r.hop(f.at(4, 0), f.at(3, -1), "lead around");
  r.hop(f.at(3, -1), f.at(4, -2), "lead parks");
  r.hop(f.at(2, 0), f.at(3, -1), "tile descends");
  r.hop(f.at(3, -1), f.at(2, -2), "tile seats");
  if (r.empty_at(f.at(3, -3)))
    r.hop(f.at(4, -2), f.at(3, -3), "lead reattach");
  else if (r.empty_at(f.at(3, -1)))
    r.hop(f.at(4, -2), f.at(3, -1), "lead reattach");
  if (tc.trailer_present && r.empty_at(f.at(3, -1))) {
    r.hop(f.at(-1, 1), f.at(0, 2), "trailer swing");
    r.hop(f.at(0, 2), f.at(1, 1), "trailer walk");
    r.hop(f.at(1, 1), f.at(2, 0), "trailer walk");
    r.hop(f.at(2, 0), f.at(3, -1), "trailer reattach");
  }
  f = f.advanced(2, -2).turned();
}

// One straight slide assisted by reservoir particles (method 2): two pads
// pre-saturate the transit, a third slips underneath before the landing pad
// swings out, so no state ever holds more than one broken bond. On the final
// step a fourth helper enters before the swing, which is where the peak
// U + 4 d1 is attained.
void stepU4_straight(Runner& r, Frame& f, bool final_step) {
  TileCorners tc = inspect(r, f);
  if (!tc.lead_present) throw CertificateError("dimer lead corner missing or multiply bonded");
  r.hop(f.at(1, 1), f.at(2, 2), "lead swing");
  r.summon(1, f.at(0, 2), "transit pad");
  r.summon(1, f.at(2, 0), "landing pad");
  r.hop(f.at(0, 0), f.at(1, 1), "tile transit");
  r.summon(1, f.at(0, 0), "underpad");
  if (final_step) r.summon(1, f.at(2, 4), "fourth helper");
  r.hop(f.at(2, 0), f.at(3, 1), "landing pad swings out");
  r.hop(f.at(1, 1), f.at(2, 0), "tile landing");
  r.hop(f.at(0, 0), f.at(1, 1), "underpad up");
  r.dismiss(f.at(2, 2), "lead leaves");
  r.dismiss(f.at(0, 2), "transit pad leaves");
  if (final_step) r.dismiss(f.at(2, 4), "fourth helper leaves");
  if (tc.trailer_present) r.dismiss(f.at(-1, 1), "trailer leaves");
  f = f.advanced(2, 0);
}

std::set<Cell> support_cells(const Configuration& cfg) {
  auto cells = cfg.tile_support().cells();
  return std::set<Cell>(cells.begin(), cells.end());
}

void check_relocation_inputs(const Configuration& start, const Cell& mover, const Cell& target) {
  if (!start.is_tiled()) throw CertificateError("start configuration is not tiled");
  std::set<Cell> support = support_cells(start);
  if (!support.count(mover)) throw CertificateError("mover cell is not in the tile support");
  if (support.count(target)) throw CertificateError("target cell is already occupied");
}

}  // namespace

PathCertificate build_dimer_path_3U(const Configuration& start, const Cell& mover,
                                    const Cell& target, const Parameters& params) {
  check_relocation_inputs(start, mover, target);
  std::set<Cell> support = support_cells(start);
  support.erase(mover);
  auto lane = find_lane(support, mover, target);

  Runner r(start, params);
  Frame f{};
  bool have_frame = false;
  for (const LaneStep& st : lane) {
    if (!have_frame || !frame_matches(f, st)) {
      f = frame_for(r.cfg, st.from, st.travel, st.support);
      have_frame = true;
    }
    if (st.turn)
      step3U_turn(r, f);
    else
      step3U_straight(r, f);
  }

  // If a trailing corner ended up detached, walk it out.
  for (int i = 0; i < r.cfg.domain().size(); ++i) {
    if (r.cfg.occ(i) == 1 && r.cfg.bonds_at(i) == 0) {
      r.dismiss(r.cfg.domain().site(i), "stranded corner leaves");
    }
  }
  PathCertificate cert = r.finish(start);
  cert.verify(params);
  return cert;
}

PathCertificate build_dimer_path_U4D1(const Configuration& start, const Cell& mover,
                                      const Cell& target, const Parameters& params) {
  check_relocation_inputs(start, mover, target);
  std::set<Cell> support = support_cells(start);
  support.erase(mover);
  auto lane = find_lane(support, mover, target);
  for (const LaneStep& st : lane) {
    if (st.turn)
      throw CertificateError("reservoir-assisted slides run along a single edge");
  }
  if (lane.empty()) throw CertificateError("mover already sits on the target");

  Runner r(start, params);
  Frame f = frame_for(r.cfg, lane.front().from, lane.front().travel, lane.front().support);
  for (size_t i = 0; i < lane.size(); ++i) {
    if (!frame_matches(f, lane[i]))
      throw CertificateError("reservoir-assisted slides run along a single edge");
    stepU4_straight(r, f, i + 1 == lane.size());
  }
  PathCertificate cert = r.finish(start);
  cert.verify(params);
  return cert;
}

PathCertificate build_bar_slide_2(const Configuration& start, const Cell& bar, bool east,
                                  const Parameters& params) {
  if (!start.is_tiled()) throw CertificateError("start configuration is not tiled");
  std::set<Cell> support = support_cells(start);
  int dir = east ? 1 : -1;
  Cell rear = bar;
  Cell front{bar.u + dir, bar.v};
  if (!support.count(rear) || !support.count(front))
    throw CertificateError("bar cells are not in the tile support");
  if (support.count({rear.u - dir, rear.v}) || support.count({front.u + dir, front.v}))
    throw CertificateError("bar of length 2 must be maximal along its row");
  // supported from below along the whole slide
  for (int k = 0; k <= 2; ++k) {
    if (!support.count({rear.u + dir * k, rear.v - 1}))
      throw CertificateError("slide needs support under the bar and the landing cell");
  }

  Runner r(start, params);
  // Canonical frame: rear tile at origin, travel toward `east`, support below.
  Frame f = frame_for(r.cfg, rear, {dir, 0}, {0, -1});
  // p2 = rear type-2 at (0,0); p1 = front type-2 at (2,0); corners
  // q3 (-1,1), q2 (1,1), q1 (3,1).
  if (!(r.occ_at(f.at(2, 0)) == 2)) throw CertificateError("front bar tile missing");
  r.hop(f.at(3, 1), f.at(4, 2), "front lead swings");
  r.summon(1, f.at(2, 2), "helper enters");
  r.hop(f.at(2, 0), f.at(3, 1), "front tile transit");
  r.hop(f.at(3, 1), f.at(4, 0), "front tile landing");
  r.hop(f.at(4, 2), f.at(5, 1), "front lead reattach");
  r.hop(f.at(2, 2), f.at(3, 1), "helper reattach");
  r.hop(f.at(1, 1), f.at(2, 2), "shared corner swings");
  r.hop(f.at(-1, 1), f.at(0, 2), "rear corner swings");
  r.hop(f.at(0, 0), f.at(1, 1), "rear tile transit");
  r.hop(f.at(1, 1), f.at(2, 0), "rear tile landing");
  r.hop(f.at(2, 2), f.at(1, 1), "shared corner reattach");
  r.dismiss(f.at(0, 2), "spare corner leaves");

  PathCertificate cert = r.finish(start);
  cert.verify(params);
  return cert;
}

PathCertificate build_bar_relocation(const Configuration& start, const BarRelocationSpec& spec,
                                     const Parameters& params) {
  if (!start.is_tiled()) throw CertificateError("start configuration is not tiled");
  if (spec.bar_len < 1 || spec.rect_w < 2 || spec.rect_h < 2)
    throw CertificateError("relocation needs a rectangle and a bar on top");
  if (spec.bar_len > spec.rect_h)
    throw CertificateError("east side cannot absorb a bar longer than the rectangle height");
  std::set<Cell> support = support_cells(start);
  const int top_v = spec.rect_origin.v + spec.rect_h;  // bar row
  for (int k = 0; k < spec.bar_len; ++k) {
    if (!support.count({spec.bar_u0 + k, top_v}))
      throw CertificateError("bar cells are not in the tile support");
  }

  Runner r(start, params);
  const Domain& dom = start.domain();

  // Helper enters and opens a good dual corner at the bottom of the east
  // face: one cell east of the rectangle's south-east tile.
  const int east_u = spec.rect_origin.u + spec.rect_w;  // column being built
  Cell se{east_u - 1, spec.rect_origin.v};
  Site se_site;
  bool found = false;
  for (int par = 0; par < 2 && !found; ++par) {
    Site s = Site::from_doubled_dual(2 * se.u + par, 2 * se.v + par);
    int id = dom.id_of(s);
    if (id >= 0 && r.cfg.occ(id) == 2) {
      se_site = s;
      found = true;
    }
  }
  if (!found) throw CertificateError("south-east rectangle tile missing");
  // Corner south-east of that tile, then one dual unit east of it.
  Site helper = Site::from_doubled_dual(se_site.du1() + 3, se_site.du2() - 1);
  r.summon(1, helper, "helper opens a corner");

  // Move bar tiles, east-most first, each onto the east column from bottom up.
  for (int k = 0; k < spec.bar_len; ++k) {
    Cell from{spec.bar_u0 + spec.bar_len - 1 - k, top_v};
    Cell to{east_u, spec.rect_origin.v + k};
    std::set<Cell> cur = support_cells(r.cfg);
    cur.erase(from);
    auto lane = find_lane(cur, from, to);
    Frame f{};
    bool have = false;
    for (const LaneStep& st : lane) {
      if (!have || !frame_matches(f, st)) {
        f = frame_for(r.cfg, st.from, st.travel, st.support);
        have = true;
      }
      if (st.turn)
        step3U_turn(r, f);
      else
        step3U_straight(r, f);
    }
  }

  // Stranded corners (the bar's spare top corners) and the helper leave.
  for (int i = 0; i < dom.size(); ++i) {
    if (r.cfg.occ(i) == 1 && r.cfg.bonds_at(i) == 0)
      r.dismiss(dom.site(i), "stranded corner leaves");
  }
  PathCertificate cert = r.finish(start);
  cert.verify(params);
  return cert;
}

}  // namespace kwl
