#include "kwl/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kwl {

std::string move_kind_name(MoveKind k) {
  switch (k) {
    case MoveKind::Hop: return "hop";
    case MoveKind::Create1: return "create1";
    case MoveKind::Create2: return "create2";
    case MoveKind::Annihilate1: return "annihilate1";
    case MoveKind::Annihilate2: return "annihilate2";
  }
  return "?";
}

std::vector<Move> legal_moves(const Configuration& cfg) {
  const Domain& dom = cfg.domain();
  std::vector<Move> out;
  for (int i = 0; i < dom.size(); ++i) {
    int t = cfg.occ(i);
    if (t != 0) {
      for (int d = 0; d < 4; ++d) {
        int j = dom.neighbor(i, d);
        if (j >= 0 && cfg.occ(j) == 0) out.push_back({MoveKind::Hop, i, j});
      }
    }
    if (dom.inner_boundary(i)) {
      if (t == 0) {
        out.push_back({MoveKind::Create1, -1, i});
        out.push_back({MoveKind::Create2, -1, i});
      } else if (t == 1) {
        out.push_back({MoveKind::Annihilate1, -1, i});
      } else {
        out.push_back({MoveKind::Annihilate2, -1, i});
      }
    }
  }
  return out;
}

bool is_legal(const Configuration& cfg, const Move& m) {
  const Domain& dom = cfg.domain();
  switch (m.kind) {
    case MoveKind::Hop: {
      if (m.from < 0 || m.from >= dom.size() || m.to < 0 || m.to >= dom.size()) return false;
      if (!adjacent(dom.site(m.from), dom.site(m.to))) return false;
      return cfg.occ(m.from) != 0 && cfg.occ(m.to) == 0;
    }
    case MoveKind::Create1:
    case MoveKind::Create2:
      return m.to >= 0 && m.to < dom.size() && dom.inner_boundary(m.to) && cfg.occ(m.to) == 0;
    case MoveKind::Annihilate1:
      return m.to >= 0 && m.to < dom.size() && dom.inner_boundary(m.to) && cfg.occ(m.to) == 1;
    case MoveKind::Annihilate2:
      return m.to >= 0 && m.to < dom.size() && dom.inner_boundary(m.to) && cfg.occ(m.to) == 2;
  }
  return false;
}

namespace {

// Active bonds a particle of type t would hold at `site`, with `exclude`
// treated as empty.
int bonds_as(const Configuration& cfg, int site, int t, int exclude) {
  const Domain& dom = cfg.domain();
  int n = 0;
  for (int d = 0; d < 4; ++d) {
    int j = dom.neighbor(site, d);
    if (j < 0 || j == exclude) continue;
    if (dom.interacting_bond(site, d) && cfg.occ(j) * t == 2) ++n;
  }
  return n;
}

}  // namespace

Energy delta_h(const Configuration& cfg, const Move& m, const Parameters& p) {
  switch (m.kind) {
    case MoveKind::Hop: {
      int t = cfg.occ(m.from);
      int before = cfg.bonds_at(m.from);
      int after = bonds_as(cfg, m.to, t, m.from);
      return p.U * Energy(before - after);
    }
    case MoveKind::Create1:
      return p.d1 - p.U * Energy(bonds_as(cfg, m.to, 1, -1));
    case MoveKind::Create2:
      return p.d2 - p.U * Energy(bonds_as(cfg, m.to, 2, -1));
    case MoveKind::Annihilate1:
      return -p.d1 + p.U * Energy(cfg.bonds_at(m.to));
    case MoveKind::Annihilate2:
      return -p.d2 + p.U * Energy(cfg.bonds_at(m.to));
  }
  throw std::logic_error("bad move kind");
}

double delta_h_d(const Configuration& cfg, const Move& m, const Parameters& p) {
  return delta_h(cfg, m, p).to_double();
}

void apply_move(Configuration& cfg, const Move& m) {
  switch (m.kind) {
    case MoveKind::Hop: {
      int t = cfg.occ(m.from);
      cfg.set(m.from, 0);
      cfg.set(m.to, t);
      return;
    }
    case MoveKind::Create1: cfg.set(m.to, 1); return;
    case MoveKind::Create2: cfg.set(m.to, 2); return;
    case MoveKind::Annihilate1:
    case MoveKind::Annihilate2: cfg.set(m.to, 0); return;
  }
}

Move reverse_move(const Move& m) {
  switch (m.kind) {
    case MoveKind::Hop: return {MoveKind::Hop, m.to, m.from};
    case MoveKind::Create1: return {MoveKind::Annihilate1, -1, m.to};
    case MoveKind::Create2: return {MoveKind::Annihilate2, -1, m.to};
    case MoveKind::Annihilate1: return {MoveKind::Create1, -1, m.to};
    case MoveKind::Annihilate2: return {MoveKind::Create2, -1, m.to};
  }
  throw std::logic_error("bad move kind");
}

double rate(const Configuration& cfg, const Move& m, const Parameters& p) {
  if (!is_legal(cfg, m)) throw std::invalid_argument("illegal move");
  Energy dh = delta_h(cfg, m, p);
  if (dh.sign() <= 0) return 1.0;
  return std::exp(-p.beta * dh.to_double());
}

int move_multiplicity(const Configuration& cfg, const Move& m, const Parameters& p) {
  if (m.kind == MoveKind::Hop) return 1;
  if (p.reservoir == ReservoirMultiplicity::Uniform) return 1;
  return cfg.domain().reservoir_bonds(m.to);
}

// ---------------------------------------------------------------------------
// KMC engine
// ---------------------------------------------------------------------------

namespace {

// Propensity slots per site: 4 hop directions plus the two reservoir
// channels (create-t when empty, annihilate when holding t).
constexpr int kSlots = 6;

class FenwickTree {
 public:
  explicit FenwickTree(int n) : n_(n), tree_(n + 1, 0.0), value_(n, 0.0) {}

  void set(int i, double v) {
    double delta = v - value_[i];
    if (delta == 0.0) return;
    value_[i] = v;
    for (int k = i + 1; k <= n_; k += k & -k) tree_[k] += delta;
  }

  double get(int i) const { return value_[i]; }

  double total() const {
    double s = 0.0;
    for (int k = n_; k > 0; k -= k & -k) s += tree_[k];
    return s;
  }

  // Smallest index with prefix sum > target (target in [0, total)).
  int find(double target) const {
    int pos = 0;
    int log = 1;
    while ((1 << log) <= n_) ++log;
    for (int k = 1 << log; k > 0; k >>= 1) {
      int next = pos + k;
      if (next <= n_ && tree_[next] <= target) {
        target -= tree_[next];
        pos = next;
      }
    }
    return pos;  // 0-based slot
  }

  // Recompute the internal sums from the stored values; bounds float drift
  // on long runs.
  void rebuild() {
    std::fill(tree_.begin(), tree_.end(), 0.0);
    for (int i = 0; i < n_; ++i) {
      for (int k = i + 1; k <= n_; k += k & -k) tree_[k] += value_[i];
    }
  }

 private:
  int n_;
  std::vector<double> tree_;
  std::vector<double> value_;
};

class KmcEngine {
 public:
  KmcEngine(const Configuration& initial, const Parameters& p)
      : cfg_(initial), p_(p), tree_(initial.domain().size() * kSlots) {
    for (int i = 0; i < cfg_.domain().size(); ++i) refresh_site(i);
  }

  const Configuration& state() const { return cfg_; }
  double total_rate() const { return tree_.total(); }

  Move slot_move(int slot) const {
    int site = slot / kSlots;
    int k = slot % kSlots;
    if (k < 4) return {MoveKind::Hop, site, cfg_.domain().neighbor(site, k)};
    if (k == 4) {
      return cfg_.occ(site) == 0 ? Move{MoveKind::Create1, -1, site}
                                 : Move{MoveKind::Annihilate1, -1, site};
    }
    return cfg_.occ(site) == 0 ? Move{MoveKind::Create2, -1, site}
                               : Move{MoveKind::Annihilate2, -1, site};
  }

  int pick_slot(double target) const { return tree_.find(target); }

  void apply(const Move& m) {
    apply_move(cfg_, m);
    // Propensities depend on occupancies within distance 2 of the changed
    // sites (hop dH looks at the neighbors of both endpoints).
    mark_ball2(m.to);
    if (m.kind == MoveKind::Hop) mark_ball2(m.from);
    for (int s : dirty_) refresh_site(s);
    dirty_.clear();
    if (++steps_since_rebuild_ >= 1000000) {
      tree_.rebuild();
      steps_since_rebuild_ = 0;
    }
  }

 private:
  void mark_ball2(int center) {
    const Domain& dom = cfg_.domain();
    push_dirty(center);
    for (int d = 0; d < 4; ++d) {
      int j = dom.neighbor(center, d);
      if (j < 0) continue;
      push_dirty(j);
      for (int e = 0; e < 4; ++e) {
        int k = dom.neighbor(j, e);
        if (k >= 0) push_dirty(k);
      }
    }
  }

  void push_dirty(int s) {
    for (int x : dirty_)
      if (x == s) return;
    dirty_.push_back(s);
  }

  void refresh_site(int site) {
    const Domain& dom = cfg_.domain();
    int t = cfg_.occ(site);
    for (int d = 0; d < 4; ++d) {
      int j = dom.neighbor(site, d);
      double prop = 0.0;
      if (t != 0 && j >= 0 && cfg_.occ(j) == 0) {
        Move m{MoveKind::Hop, site, j};
        prop = rate(cfg_, m, p_);
      }
      tree_.set(site * kSlots + d, prop);
    }
    double c1 = 0.0, c2 = 0.0;
    if (dom.inner_boundary(site)) {
      int mult = p_.reservoir == ReservoirMultiplicity::PerBond ? dom.reservoir_bonds(site) : 1;
      if (t == 0) {
        c1 = mult * rate(cfg_, {MoveKind::Create1, -1, site}, p_);
        c2 = mult * rate(cfg_, {MoveKind::Create2, -1, site}, p_);
      } else if (t == 1) {
        c1 = mult * rate(cfg_, {MoveKind::Annihilate1, -1, site}, p_);
      } else {
        c2 = mult * rate(cfg_, {MoveKind::Annihilate2, -1, site}, p_);
      }
    }
    tree_.set(site * kSlots + 4, c1);
    tree_.set(site * kSlots + 5, c2);
  }

  Configuration cfg_;
  Parameters p_;
  FenwickTree tree_;
  std::vector<int> dirty_;
  int steps_since_rebuild_ = 0;
};

}  // namespace

Trajectory kmc_run(const Configuration& initial, const Parameters& params,
                   const std::function<bool(const Configuration&)>& stop, double max_time,
                   std::uint64_t seed, bool record_events) {
  if (params.beta <= 0) throw std::invalid_argument("kmc_run needs beta > 0");
  Trajectory traj;
  traj.seed = seed;
  CounterRng rng(seed);

  Configuration state = initial;
  if (stop(state)) {
    traj.hit = true;
    traj.final_time = 0.0;
    return traj;
  }

  KmcEngine engine(initial, params);
  double t = 0.0;
  while (true) {
    double total = engine.total_rate();
    if (!(total > 0.0)) throw std::runtime_error("frozen state: no enabled move");
    t += rng.next_exponential(total);
    if (t > max_time) {
      traj.hit = false;
      traj.final_time = max_time;
      return traj;
    }
    double target = rng.next_uniform() * total;
    if (target >= total) target = std::nexttoward(total, 0.0);
    Move m = engine.slot_move(engine.pick_slot(target));
    engine.apply(m);
    if (record_events) traj.events.push_back({t, m});
    if (stop(engine.state())) {
      traj.hit = true;
      traj.final_time = t;
      return traj;
    }
  }
}

std::string Trajectory::to_jsonl(const Domain& dom) const {
  std::ostringstream os;
  for (const auto& ev : events) {
    nlohmann::json line;
    line["t"] = ev.t;
    line["kind"] = move_kind_name(ev.move.kind);
    if (ev.move.kind == MoveKind::Hop) {
      const Site f = dom.site(ev.move.from);
      line["from"] = {f.x1, f.x2};
    }
    const Site s = dom.site(ev.move.to);
    line["to"] = {s.x1, s.x2};
    os << line.dump() << "\n";
  }
  return os.str();
}

BalanceReport detailed_balance_check(const std::vector<std::pair<Configuration, Move>>& pairs,
                                     const Parameters& params) {
  BalanceReport rep;
  for (const auto& [cfg, m] : pairs) {
    ++rep.checked;
    if (!is_legal(cfg, m)) throw std::invalid_argument("non-communicating pair");
    Energy dh = delta_h(cfg, m, params);

    Configuration after = cfg;
    apply_move(after, m);
    Energy exact = after.energy(params) - cfg.energy(params);
    Move rev = reverse_move(m);
    bool ok = is_legal(after, rev) && exact == dh &&
              delta_h(after, rev, params) == -dh &&
              move_multiplicity(cfg, m, params) == move_multiplicity(after, rev, params);
    // Symbolic balance: H(eta) + [dH]_+ must equal H(eta') + [-dH]_+ exactly.
    Energy zero(0);
    ok = ok && cfg.energy(params) + max(dh, zero) == after.energy(params) + max(-dh, zero);
    if (!ok) {
      ++rep.failures;
      if (rep.first_failure.empty()) {
        rep.first_failure = move_kind_name(m.kind) + " at site " + std::to_string(m.to);
      }
    }
  }
  return rep;
}

}  // namespace kwl
