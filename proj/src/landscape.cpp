#include "kwl/landscape.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <queue>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kwl {

int EnergyGraph::add_node(Energy e) {
  h.push_back(e);
  adj.emplace_back();
  return size() - 1;
}

void EnergyGraph::add_edge(int a, int b) {
  if (a == b) return;
  for (int x : adj[a])
    if (x == b) return;
  adj[a].push_back(b);
  adj[b].push_back(a);
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void merge(int a, int b) { parent[find(a)] = find(b); }
};

std::vector<int> nodes_by_energy(const EnergyGraph& g) {
  std::vector<int> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.h[a] != g.h[b]) return g.h[a] < g.h[b];
    return a < b;
  });
  return order;
}

// Shortest path between a and b using only nodes with h <= cap.
std::vector<int> path_below(const EnergyGraph& g, int a, int b, const Energy& cap) {
  std::vector<int> prev(g.size(), -2);
  std::queue<int> q;
  if (g.h[a] <= cap) {
    prev[a] = -1;
    q.push(a);
  }
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    if (x == b) break;
    for (int y : g.adj[x]) {
      if (prev[y] == -2 && g.h[y] <= cap) {
        prev[y] = x;
        q.push(y);
      }
    }
  }
  std::vector<int> path;
  if (prev[b] == -2) return path;
  for (int x = b; x != -1; x = prev[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

PhiResult phi(const EnergyGraph& g, int a, int b) {
  return phi_to_set(g, a, std::vector<int>{b});
}

PhiResult phi_to_set(const EnergyGraph& g, int a, const std::vector<int>& targets) {
  PhiResult out;
  if (targets.empty()) return out;
  for (int t : targets) {
    if (t == a) {
      out.value = g.h[a];
      out.witness = {a};
      return out;
    }
  }
  std::vector<bool> is_target(g.size(), false);
  for (int t : targets) is_target[t] = true;

  UnionFind uf(g.size());
  std::vector<bool> active(g.size(), false);
  // Component label -> whether it holds a target / the node a.
  std::vector<char> has_target(g.size(), 0), has_a(g.size(), 0);

  for (int u : nodes_by_energy(g)) {
    active[u] = true;
    has_target[u] = is_target[u];
    has_a[u] = (u == a);
    for (int v : g.adj[u]) {
      if (!active[v]) continue;
      int ru = uf.find(u), rv = uf.find(v);
      if (ru == rv) continue;
      uf.merge(ru, rv);
      int r = uf.find(rv);
      has_target[r] = has_target[ru] | has_target[rv];
      has_a[r] = has_a[ru] | has_a[rv];
    }
    int r = uf.find(u);
    if (has_a[r] && has_target[r]) {
      out.value = g.h[u];
      for (int t : targets) {
        std::vector<int> w = path_below(g, a, t, g.h[u]);
        if (!w.empty()) {
          out.witness = std::move(w);
          break;
        }
      }
      return out;
    }
  }
  return out;  // disconnected: unknown above cap
}

namespace {

// True when there are two vertex-disjoint paths (apart from z) from z to a
// and to b inside the subgraph {h <= cap}: unit-capacity flow on the
// node-split digraph, two augmenting passes.
bool on_some_optimal_path(const EnergyGraph& g, int z, int a, int b, const Energy& cap) {
  if (z == a || z == b) return true;
  int n = g.size();
  // Node-split ids: in(v) = 2v, out(v) = 2v+1; super-sink = 2n.
  int N = 2 * n + 1;
  std::vector<std::map<int, int>> capmap(N);
  auto add_arc = [&](int u, int v, int c) { capmap[u][v] += c; };
  for (int v = 0; v < n; ++v) {
    if (g.h[v] > cap) continue;
    int c = (v == z) ? 2 : 1;
    add_arc(2 * v, 2 * v + 1, c);
    for (int w : g.adj[v]) {
      if (g.h[w] > cap) continue;
      add_arc(2 * v + 1, 2 * w, 1);
    }
  }
  add_arc(2 * a, 2 * n, 1);  // endpoints absorb via their in-node
  add_arc(2 * b, 2 * n, 1);
  // Endpoint in->out arcs would let paths pass through a or b; remove them.
  capmap[2 * a].erase(2 * a + 1);
  capmap[2 * b].erase(2 * b + 1);

  int flow = 0;
  for (int round = 0; round < 2; ++round) {
    std::vector<int> prev(N, -2);
    std::queue<int> q;
    q.push(2 * z + 1);
    prev[2 * z + 1] = -1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (auto& [y, c] : capmap[x]) {
        if (c > 0 && prev[y] == -2) {
          prev[y] = x;
          q.push(y);
        }
      }
    }
    if (prev[2 * n] == -2) break;
    for (int x = 2 * n; prev[x] != -1; x = prev[x]) {
      capmap[prev[x]][x] -= 1;
      capmap[x][prev[x]] += 1;
    }
    ++flow;
  }
  return flow >= 2;
}

}  // namespace

Capped<std::vector<int>> saddle_set(const EnergyGraph& g, int a, int b) {
  Capped<std::vector<int>> out;
  PhiResult p = phi(g, a, b);
  if (!p.known()) return out;
  std::vector<int> sads;
  for (int z = 0; z < g.size(); ++z) {
    if (g.h[z] == *p.value && on_some_optimal_path(g, z, a, b, *p.value)) sads.push_back(z);
  }
  out.value = std::move(sads);
  return out;
}

Capped<Energy> stability_level(const EnergyGraph& g, int v) {
  Capped<Energy> out;
  std::vector<int> lower;
  for (int u = 0; u < g.size(); ++u)
    if (g.h[u] < g.h[v]) lower.push_back(u);
  if (lower.empty()) return out;  // minimum of the graph: unknown above cap
  PhiResult p = phi_to_set(g, v, lower);
  if (!p.known()) return out;
  out.value = *p.value - g.h[v];
  return out;
}

std::optional<OptimalPathFamily> optimal_path_family(const EnergyGraph& g, int a, int b,
                                                     std::uint64_t path_budget) {
  PhiResult p = phi(g, a, b);
  if (!p.known()) return std::nullopt;
  OptimalPathFamily fam;
  fam.level = *p.value;

  std::vector<int> level_nodes;
  std::vector<int> bit(g.size(), -1);
  for (int v = 0; v < g.size(); ++v) {
    if (g.h[v] == fam.level) {
      bit[v] = static_cast<int>(level_nodes.size());
      level_nodes.push_back(v);
    }
  }
  if (level_nodes.size() > 64) return std::nullopt;

  std::set<std::uint64_t> masks;
  std::vector<bool> onpath(g.size(), false);
  std::uint64_t seen = 0;
  bool overflow = false;

  // All simple a -> b paths inside {h <= level}; each is an optimal path and
  // its argmax set is the set of level nodes it visits.
  std::vector<std::pair<int, size_t>> stack;  // node, next neighbor index
  std::uint64_t mask = 0;
  auto enter = [&](int v) {
    stack.push_back({v, 0});
    onpath[v] = true;
    if (bit[v] >= 0) mask |= 1ULL << bit[v];
  };
  auto leave = [&]() {
    int v = stack.back().first;
    onpath[v] = false;
    if (bit[v] >= 0) mask &= ~(1ULL << bit[v]);
    stack.pop_back();
  };
  enter(a);
  while (!stack.empty() && !overflow) {
    auto [node, idx] = stack.back();
    if (node == b) {
      masks.insert(mask);
      if (++seen > path_budget) overflow = true;
      leave();
      continue;
    }
    if (idx >= g.adj[node].size()) {
      leave();
      continue;
    }
    stack.back().second = idx + 1;
    int next = g.adj[node][idx];
    if (onpath[next] || g.h[next] > fam.level) continue;
    enter(next);
  }
  if (overflow) return std::nullopt;

  std::uint64_t unionmask = 0;
  for (std::uint64_t m : masks) unionmask |= m;
  for (size_t i = 0; i < level_nodes.size(); ++i)
    if (unionmask & (1ULL << i)) fam.saddles.push_back(level_nodes[i]);
  // Re-pack masks over the surviving saddles.
  std::vector<int> repack(level_nodes.size(), -1);
  int j = 0;
  for (size_t i = 0; i < level_nodes.size(); ++i)
    if (unionmask & (1ULL << i)) repack[i] = j++;
  for (std::uint64_t m : masks) {
    std::uint64_t r = 0;
    for (size_t i = 0; i < level_nodes.size(); ++i)
      if (m & (1ULL << i)) r |= 1ULL << repack[i];
    fam.masks.push_back(r);
  }
  std::sort(fam.masks.begin(), fam.masks.end());
  fam.masks.erase(std::unique(fam.masks.begin(), fam.masks.end()), fam.masks.end());
  fam.paths_seen = seen;
  return fam;
}

std::optional<std::vector<int>> essential_saddles(const EnergyGraph& g, int a, int b,
                                                  std::uint64_t path_budget) {
  auto fam = optimal_path_family(g, a, b, path_budget);
  if (!fam) return std::nullopt;
  std::vector<int> out;
  for (size_t i = 0; i < fam->saddles.size(); ++i) {
    std::uint64_t bit = 1ULL << i;
    bool essential = false;
    for (std::uint64_t T : fam->masks) {
      if (!(T & bit)) continue;
      std::uint64_t rest = T & ~bit;
      bool dominated = false;
      for (std::uint64_t T2 : fam->masks) {
        if ((T2 & rest) == T2 && (T2 & bit) == 0) {
          dominated = true;  // T2 subseteq T \ {z}
          break;
        }
      }
      if (!dominated) {
        essential = true;
        break;
      }
    }
    if (essential) out.push_back(fam->saddles[i]);
  }
  return out;
}

namespace {

void minimal_transversals(const std::vector<std::uint64_t>& edges, std::uint64_t chosen,
                          std::uint64_t forbidden, size_t edge_idx, int universe,
                          std::vector<std::uint64_t>& out) {
  // Find the first edge not hit by `chosen`.
  size_t i = edge_idx;
  while (i < edges.size() && (edges[i] & chosen)) ++i;
  if (i == edges.size()) {
    // Transversal; keep only if irredundant: every chosen element has a
    // private edge.
    std::uint64_t c = chosen;
    for (int v = 0; v < universe; ++v) {
      if (!(c & (1ULL << v))) continue;
      bool has_private = false;
      for (std::uint64_t e : edges) {
        if ((e & c) == (e & (1ULL << v)) && (e & (1ULL << v))) {
          has_private = true;
          break;
        }
      }
      if (!has_private) return;
    }
    out.push_back(chosen);
    return;
  }
  std::uint64_t candidates = edges[i] & ~forbidden;
  for (int v = 0; v < universe; ++v) {
    std::uint64_t bv = 1ULL << v;
    if (!(candidates & bv)) continue;
    minimal_transversals(edges, chosen | bv, forbidden, i + 1, universe, out);
    forbidden |= bv;  // later branches must exclude v, avoiding duplicates
  }
}

}  // namespace

std::optional<std::vector<std::vector<int>>> minimal_gates(const EnergyGraph& g, int a, int b,
                                                           std::uint64_t path_budget) {
  auto fam = optimal_path_family(g, a, b, path_budget);
  if (!fam) return std::nullopt;
  std::vector<std::uint64_t> raw;
  minimal_transversals(fam->masks, 0, 0, 0, static_cast<int>(fam->saddles.size()), raw);
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  std::vector<std::vector<int>> out;
  for (std::uint64_t m : raw) {
    std::vector<int> gate;
    for (size_t i = 0; i < fam->saddles.size(); ++i)
      if (m & (1ULL << i)) gate.push_back(fam->saddles[i]);
    out.push_back(std::move(gate));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Real-domain exploration
// ---------------------------------------------------------------------------

namespace {

bool within_subbox(const Configuration& cfg, const std::array<int, 4>& box) {
  const Domain& dom = cfg.domain();
  for (int i = 0; i < dom.size(); ++i) {
    if (cfg.occ(i) == 0) continue;
    const Site s = dom.site(i);
    if (s.du1() < box[0] || s.du1() > box[1] || s.du2() < box[2] || s.du2() > box[3])
      return false;
  }
  return true;
}

}  // namespace

int StateGraph::find(const Configuration& cfg) const {
  auto it = index_.find(cfg.occupancy_key());
  return it == index_.end() ? -1 : it->second;
}

std::string StateGraph::to_json() const {
  nlohmann::json j;
  j["cap"] = cap.str();
  j["truncated"] = truncated;
  nlohmann::json nodes = nlohmann::json::array();
  for (int i = 0; i < graph.size(); ++i)
    nodes.push_back({{"h", graph.h[i].str()}, {"n2", n2[i]}});
  j["nodes"] = nodes;
  nlohmann::json edges = nlohmann::json::array();
  for (int a = 0; a < graph.size(); ++a)
    for (int b : graph.adj[a])
      if (a < b) edges.push_back({a, b});
  j["edges"] = edges;
  return j.dump();
}

StateGraph explore(const Configuration& start, const Parameters& params, const Energy& cap,
                   const ExploreConstraints& constraints) {
  StateGraph sg;
  sg.cap = cap;
  Energy h0 = start.energy(params);
  if (h0 > cap) throw std::invalid_argument("start lies above the cap");
  if (start.n2() < constraints.min_n2 || start.n2() > constraints.max_n2)
    throw std::invalid_argument("start violates the n2 window");
  if (constraints.subbox && !within_subbox(start, *constraints.subbox))
    throw std::invalid_argument("start violates the sub-box");

  auto push = [&](const Configuration& cfg, Energy h) -> int {
    auto [it, fresh] = sg.index_.try_emplace(cfg.occupancy_key(), sg.graph.size());
    if (fresh) {
      sg.graph.add_node(h);
      sg.states.push_back(cfg);
      sg.n2.push_back(cfg.n2());
    }
    return it->second;
  };

  push(start, h0);
  for (std::size_t head = 0; head < sg.states.size(); ++head) {
    if (sg.states.size() > constraints.node_budget) {
      sg.truncated = true;
      break;
    }
    Configuration cur = sg.states[head];
    Energy h = sg.graph.h[head];
    for (const Move& m : legal_moves(cur)) {
      Energy hn = h + delta_h(cur, m, params);
      if (hn > cap) continue;
      Configuration next = cur;
      apply_move(next, m);
      if (next.n2() < constraints.min_n2 || next.n2() > constraints.max_n2) continue;
      if (constraints.subbox) {
        const Site s = next.domain().site(m.to);
        const auto& box = *constraints.subbox;
        if (s.du1() < box[0] || s.du1() > box[1] || s.du2() < box[2] || s.du2() > box[3])
          continue;
      }
      int id = push(next, hn);
      sg.graph.add_edge(static_cast<int>(head), id);
    }
  }
  return sg;
}

std::vector<int> g_set(const StateGraph& sg, const std::vector<int>& sources,
                       const std::vector<int>& targets, const Energy& gamma, bool strict) {
  if (sg.cap < gamma) throw std::invalid_argument("cap must reach gamma*");
  auto feasible = [&](int v) { return strict ? sg.graph.h[v] < gamma : sg.graph.h[v] <= gamma; };

  std::set<int> result;
  std::vector<bool> is_target(sg.graph.size(), false);
  for (int t : targets) is_target[t] = true;

  for (int src : sources) {
    if (!feasible(src)) continue;
    // best[v] = max over feasible paths src -> v (n2 never above n2(src)) of
    // the minimum n2 along the path.
    std::vector<int> best(sg.graph.size(), -1);
    std::priority_queue<std::pair<int, int>> pq;  // (bound, node)
    best[src] = sg.n2[src];
    pq.push({best[src], src});
    while (!pq.empty()) {
      auto [bound, v] = pq.top();
      pq.pop();
      if (bound < best[v]) continue;
      for (int w : sg.graph.adj[v]) {
        if (!feasible(w) || sg.n2[w] > sg.n2[src]) continue;
        int nb = std::min(bound, sg.n2[w]);
        if (nb > best[w]) {
          best[w] = nb;
          pq.push({nb, w});
        }
      }
    }
    for (int t : targets) {
      if (best[t] == sg.n2[t]) result.insert(t);  // path min equals target n2
    }
  }
  return std::vector<int>(result.begin(), result.end());
}

// ---------------------------------------------------------------------------
// Reduced (reservoir) exploration
// ---------------------------------------------------------------------------

bool ReducedState::operator<(const ReducedState& o) const {
  if (local != o.local) return local < o.local;
  if (free1 != o.free1) return free1 < o.free1;
  return free2 < o.free2;
}

bool ReducedState::operator==(const ReducedState& o) const {
  return local == o.local && free1 == o.free1 && free2 == o.free2;
}

namespace {

struct Patch {
  // Dense doubled-dual grid around the local particles.
  int aMin, aMax, bMin, bMax;
  std::vector<std::uint8_t> occ;

  int W() const { return aMax - aMin + 1; }
  int H() const { return bMax - bMin + 1; }
  int idx(int A, int B) const { return (A - aMin) * H() + (B - bMin); }
  bool inside(int A, int B) const { return A >= aMin && A <= aMax && B >= bMin && B <= bMax; }
  int at(int A, int B) const { return inside(A, B) ? occ[idx(A, B)] : 0; }
};

Patch make_patch(const std::vector<std::array<int, 3>>& local, int margin) {
  Patch p;
  if (local.empty()) {
    p.aMin = p.bMin = 0;
    p.aMax = p.bMax = 0;
    p.occ.assign(1, 0);
    return p;
  }
  p.aMin = p.aMax = local[0][0];
  p.bMin = p.bMax = local[0][1];
  for (const auto& t : local) {
    p.aMin = std::min(p.aMin, t[0]);
    p.aMax = std::max(p.aMax, t[0]);
    p.bMin = std::min(p.bMin, t[1]);
    p.bMax = std::max(p.bMax, t[1]);
  }
  p.aMin -= margin;
  p.aMax += margin;
  p.bMin -= margin;
  p.bMax += margin;
  p.occ.assign(static_cast<size_t>(p.W()) * p.H(), 0);
  for (const auto& t : local) p.occ[p.idx(t[0], t[1])] = static_cast<std::uint8_t>(t[2]);
  return p;
}

constexpr std::array<std::pair<int, int>, 4> kHops = {{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

int patch_bonds_at(const Patch& p, int A, int B) {
  int t = p.at(A, B);
  if (t == 0) return 0;
  int n = 0;
  for (auto [da, db] : kHops)
    if (p.at(A + da, B + db) * t == 2) ++n;
  return n;
}

// Flood the empty cells from the patch border; a particle can reach the
// reservoir iff an adjacent empty cell is flooded (or it sits on the border).
std::vector<char> flood_empty(const Patch& p) {
  std::vector<char> reach(p.occ.size(), 0);
  std::queue<std::pair<int, int>> q;
  auto push = [&](int A, int B) {
    if (!p.inside(A, B)) return;
    int i = p.idx(A, B);
    if (reach[i] || p.occ[i] != 0) return;
    reach[i] = 1;
    q.push({A, B});
  };
  for (int A = p.aMin; A <= p.aMax; ++A) {
    push(A, p.bMin);
    push(A, p.bMax);
    // keep parity classes distinct: both border rows/cols seed the flood
  }
  for (int B = p.bMin; B <= p.bMax; ++B) {
    push(p.aMin, B);
    push(p.aMax, B);
  }
  while (!q.empty()) {
    auto [A, B] = q.front();
    q.pop();
    for (auto [da, db] : kHops) push(A + da, B + db);
  }
  return reach;
}

bool patch_lattice_connecting(const Patch& p, const std::vector<char>& reach, int A, int B) {
  if (A == p.aMin || A == p.aMax || B == p.bMin || B == p.bMax) return true;
  for (auto [da, db] : kHops) {
    if (p.inside(A + da, B + db) && reach[p.idx(A + da, B + db)]) return true;
  }
  return false;
}

ReducedState normalize_reduced(std::vector<std::array<int, 3>> local, int f1, int f2) {
  // Absorb detached, reservoir-reachable particles that touch nothing.
  bool changed = true;
  while (changed && !local.empty()) {
    changed = false;
    Patch p = make_patch(local, 1);
    std::vector<char> reach = flood_empty(p);
    for (size_t i = 0; i < local.size(); ++i) {
      auto [A, B, t] = local[i];
      bool isolated = true;
      for (const auto& o : local) {
        if (o == local[i]) continue;
        if (std::abs(o[0] - A) <= 1 && std::abs(o[1] - B) <= 1) isolated = false;
      }
      if (!isolated) continue;
      if (!patch_lattice_connecting(p, reach, A, B)) continue;
      (t == 1 ? f1 : f2) += 1;
      local.erase(local.begin() + i);
      changed = true;
      break;
    }
  }
  if (!local.empty()) {
    int aMin = local[0][0], bMin = local[0][1];
    for (const auto& t : local) {
      aMin = std::min(aMin, t[0]);
      bMin = std::min(bMin, t[1]);
    }
    int s = -aMin;
    int t = ((bMin % 2 + 2) % 2 == (aMin % 2 + 2) % 2) ? -bMin : -bMin + 1;
    for (auto& c : local) {
      c[0] += s;
      c[1] += t;
    }
    std::sort(local.begin(), local.end());
  }
  ReducedState out;
  out.local = std::move(local);
  out.free1 = f1;
  out.free2 = f2;
  return out;
}

}  // namespace

ReducedState reduce_configuration(const Configuration& cfg) {
  std::vector<std::array<int, 3>> local;
  const Domain& dom = cfg.domain();
  for (int i = 0; i < dom.size(); ++i) {
    if (cfg.occ(i) == 0) continue;
    const Site s = dom.site(i);
    local.push_back({s.du1(), s.du2(), cfg.occ(i)});
  }
  return normalize_reduced(std::move(local), 0, 0);
}

ReducedState reduced_from_polyomino(const DualPolyomino& poly) {
  // Tiled embedding: type-2 at the cell centers (even parity), type-1 at the
  // corner lattice.
  std::set<std::array<int, 3>> parts;
  for (const Cell& c : poly.cells()) {
    parts.insert({2 * c.u, 2 * c.v, 2});
    for (auto [da, db] : kHops) parts.insert({2 * c.u + da, 2 * c.v + db, 1});
  }
  return normalize_reduced({parts.begin(), parts.end()}, 0, 0);
}

Energy reduced_energy(const ReducedState& s, const Parameters& p) {
  int n1 = s.free1, n2 = s.free2, bonds = 0;
  Patch patch = make_patch(s.local, 1);
  for (const auto& t : s.local) {
    if (t[2] == 1) ++n1;
    if (t[2] == 2) ++n2;
    bonds += patch_bonds_at(patch, t[0], t[1]);
  }
  bonds /= 2;
  return p.d1 * Energy(n1) + p.d2 * Energy(n2) - p.U * Energy(bonds);
}

DualPolyomino reduced_tile_support(const ReducedState& s) {
  std::vector<Cell> cells;
  for (const auto& t : s.local) {
    if (t[2] != 2) continue;
    int A = t[0], B = t[1];
    int cu = A >= 0 ? A / 2 : (A - 1) / 2;
    int cv = B >= 0 ? B / 2 : (B - 1) / 2;
    cells.push_back({cu, cv});
  }
  return DualPolyomino(std::move(cells));
}

bool reduced_is_tiled(const ReducedState& s) {
  if (s.free1 > 0 || s.free2 > 0) return false;
  Patch patch = make_patch(s.local, 1);
  for (const auto& t : s.local) {
    int b = patch_bonds_at(patch, t[0], t[1]);
    if (t[2] == 2 && b != 4) return false;
    if (t[2] == 1 && b == 0) return false;
  }
  return true;
}

ReducedGraph explore_reduced(const ReducedState& start, const Parameters& params,
                             const Energy& cap, const ReducedConstraints& constraints) {
  ReducedGraph rg;
  rg.cap = cap;

  auto extent_ok = [&](const ReducedState& s) {
    if (s.local.empty()) return true;
    int aMin = s.local[0][0], aMax = aMin, bMin = s.local[0][1], bMax = bMin;
    for (const auto& t : s.local) {
      aMin = std::min(aMin, t[0]);
      aMax = std::max(aMax, t[0]);
      bMin = std::min(bMin, t[1]);
      bMax = std::max(bMax, t[1]);
    }
    return aMax - aMin <= 2 * constraints.max_extent && bMax - bMin <= 2 * constraints.max_extent;
  };

  auto n2_of = [](const ReducedState& s) {
    int n = s.free2;
    for (const auto& t : s.local)
      if (t[2] == 2) ++n;
    return n;
  };

  auto push = [&](const ReducedState& s, const Energy& h) -> int {
    auto [it, fresh] = rg.index.try_emplace(s, rg.graph.size());
    if (fresh) {
      rg.graph.add_node(h);
      rg.states.push_back(s);
      rg.n2.push_back(n2_of(s));
    }
    return it->second;
  };

  Energy h0 = reduced_energy(start, params);
  if (h0 > cap) throw std::invalid_argument("start lies above the cap");
  push(start, h0);

  for (std::size_t head = 0; head < rg.states.size(); ++head) {
    if (rg.states.size() > constraints.node_budget) {
      rg.truncated = true;
      break;
    }
    const ReducedState cur = rg.states[head];
    const Energy h = rg.graph.h[head];
    const int cur_n2 = rg.n2[head];

    auto try_push = [&](std::vector<std::array<int, 3>> local, int f1, int f2,
                        const Energy& hn) {
      if (hn > cap) return;
      ReducedState next = normalize_reduced(std::move(local), f1, f2);
      int n2 = n2_of(next);
      if (n2 < constraints.min_n2 || n2 > constraints.max_n2) return;
      if (!extent_ok(next)) return;
      int id = push(next, hn);
      rg.graph.add_edge(static_cast<int>(head), id);
    };

    Patch patch = make_patch(cur.local, 2);
    std::vector<char> reach = flood_empty(patch);

    // Local hops.
    for (size_t i = 0; i < cur.local.size(); ++i) {
      auto [A, B, t] = cur.local[i];
      int before = patch_bonds_at(patch, A, B);
      for (auto [da, db] : kHops) {
        int An = A + da, Bn = B + db;
        if (patch.at(An, Bn) != 0) continue;
        int after = 0;
        for (auto [ea, eb] : kHops) {
          int Aa = An + ea, Bb = Bn + eb;
          if (Aa == A && Bb == B) continue;
          if (patch.at(Aa, Bb) * t == 2) ++after;
        }
        Energy hn = h + params.U * Energy(before - after);
        auto local = cur.local;
        local[i] = {An, Bn, t};
        try_push(std::move(local), cur.free1, cur.free2, hn);
      }
      // Lift: detached particle returns to the gas.
      if (before == 0 && patch_lattice_connecting(patch, reach, A, B)) {
        auto local = cur.local;
        local.erase(local.begin() + i);
        try_push(std::move(local), cur.free1 + (t == 1), cur.free2 + (t == 2), h);
      }
    }

    // Land a detached particle next to the droplet (flat; summoning paid on
    // entry). Positions: empty, reservoir-reachable, adjacent to something.
    if (cur.free1 > 0 || cur.free2 > 0) {
      if (cur.local.empty()) {
        if (cur.free1 > 0) try_push({{0, 0, 1}}, cur.free1 - 1, cur.free2, h);
        if (cur.free2 > 0) try_push({{0, 0, 2}}, cur.free1, cur.free2 - 1, h);
      } else {
        std::set<std::pair<int, int>> spots;
        for (const auto& t : cur.local) {
          for (int da = -2; da <= 2; ++da) {
            for (int db = -2; db <= 2; ++db) {
              if (((da ^ db) & 1) != 0) continue;  // keep site parity
              int A = t[0] + da, B = t[1] + db;
              if (patch.at(A, B) != 0 || !patch.inside(A, B)) continue;
              if (!patch_lattice_connecting(patch, reach, A, B)) continue;
              spots.insert({A, B});
            }
          }
        }
        for (auto [A, B] : spots) {
          for (int t : {1, 2}) {
            if ((t == 1 ? cur.free1 : cur.free2) == 0) continue;
            int gained = 0;
            for (auto [da, db] : kHops)
              if (patch.at(A + da, B + db) * t == 2) ++gained;
            Energy hn = h - params.U * Energy(gained);
            auto local = cur.local;
            local.push_back({A, B, t});
            try_push(std::move(local), cur.free1 - (t == 1), cur.free2 - (t == 2), hn);
          }
        }
      }
    }

    // Reservoir exchanges.
    try_push(cur.local, cur.free1 + 1, cur.free2, h + params.d1);
    try_push(cur.local, cur.free1, cur.free2 + 1, h + params.d2);
    if (cur.free1 > 0) try_push(cur.local, cur.free1 - 1, cur.free2, h - params.d1);
    if (cur.free2 > 0) try_push(cur.local, cur.free1, cur.free2 - 1, h - params.d2);

    (void)cur_n2;
  }
  return rg;
}

int ReducedGraph::find(const ReducedState& s) const {
  auto it = index.find(s);
  return it == index.end() ? -1 : it->second;
}

}  // namespace kwl
