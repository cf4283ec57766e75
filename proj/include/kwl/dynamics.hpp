#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kwl/config.hpp"
#include "kwl/rng.hpp"

namespace kwl {

enum class MoveKind : std::uint8_t { Hop, Create1, Create2, Annihilate1, Annihilate2 };

struct Move {
  MoveKind kind = MoveKind::Hop;
  int from = -1;  // hop only
  int to = -1;

  friend bool operator==(const Move& a, const Move& b) {
    return a.kind == b.kind && a.from == b.from && a.to == b.to;
  }
};

std::string move_kind_name(MoveKind k);

// The complete set of allowed moves from a configuration, in deterministic
// order (site id, then kind): hops of particles to empty neighbors, and
// creations/annihilations on the inner boundary.
std::vector<Move> legal_moves(const Configuration& cfg);

bool is_legal(const Configuration& cfg, const Move& m);

// Exact energy change of a legal move, computed locally.
Energy delta_h(const Configuration& cfg, const Move& m, const Parameters& p);
double delta_h_d(const Configuration& cfg, const Move& m, const Parameters& p);

void apply_move(Configuration& cfg, const Move& m);
Move reverse_move(const Move& m);

// Metropolis rate exp(-beta [dH]_+); throws on illegal moves.
double rate(const Configuration& cfg, const Move& m, const Parameters& p);

// Reservoir-channel multiplicity of a move (1 for hops; the number of
// exterior bonds of the boundary site for creations/annihilations under
// ReservoirMultiplicity::PerBond).
int move_multiplicity(const Configuration& cfg, const Move& m, const Parameters& p);

struct TrajectoryEvent {
  double t = 0.0;
  Move move;
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<TrajectoryEvent> events;
  double final_time = 0.0;
  bool hit = false;  // stop predicate satisfied before max_time

  std::string to_jsonl(const Domain& dom) const;  // one event per line
};

// Continuous-time kinetic Monte Carlo: exponential holding times at total
// rate R, next move chosen proportionally to rate x multiplicity. Stops when
// stop(state) holds or time exceeds max_time. Deterministic given the seed.
Trajectory kmc_run(const Configuration& initial, const Parameters& params,
                   const std::function<bool(const Configuration&)>& stop, double max_time,
                   std::uint64_t seed, bool record_events = false);

struct BalanceReport {
  int checked = 0;
  int failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0; }
};

// Verifies mu(eta) c(eta,eta') = mu(eta') c(eta',eta) by exact comparison of
// the rate exponents: the reverse move must be legal with dH' = -dH, the
// reservoir multiplicities must match, and the locally computed dH must agree
// with a from-scratch energy difference.
BalanceReport detailed_balance_check(const std::vector<std::pair<Configuration, Move>>& pairs,
                                     const Parameters& params);

}  // namespace kwl
