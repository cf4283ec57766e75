#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kwl/config.hpp"
#include "kwl/dynamics.hpp"

namespace kwl {

// ---------------------------------------------------------------------------
// Abstract energy graphs. Nodes carry exact energies; edges are symmetric
// (communication is symmetric). Every query that may be cut off by an
// exploration cap returns a tri-state: a value, or "unknown above cap" -
// never a fabricated number.
// ---------------------------------------------------------------------------

struct EnergyGraph {
  std::vector<Energy> h;
  std::vector<std::vector<int>> adj;

  int add_node(Energy e);
  void add_edge(int a, int b);
  int size() const { return static_cast<int>(h.size()); }
};

template <typename T>
struct Capped {
  std::optional<T> value;  // empty means "unknown above cap"
  bool known() const { return value.has_value(); }
};

struct PhiResult {
  std::optional<Energy> value;
  std::vector<int> witness;  // one optimal path when known
  bool known() const { return value.has_value(); }
};

// Communication height between two nodes: min over paths of the max energy,
// by a threshold sweep (union-find over nodes sorted by energy).
PhiResult phi(const EnergyGraph& g, int a, int b);

// Min over b in targets of phi(a, b).
PhiResult phi_to_set(const EnergyGraph& g, int a, const std::vector<int>& targets);

// Nodes at the communication level lying on at least one optimal path
// (checked by vertex-disjoint reachability, not plain connectivity).
Capped<std::vector<int>> saddle_set(const EnergyGraph& g, int a, int b);

// Stability level: phi(v, {u : h(u) < h(v)}) - h(v).
Capped<Energy> stability_level(const EnergyGraph& g, int v);

// The family of distinct argmax-sets over all optimal paths, as sorted node
// lists; the raw material for gate analysis. Fails (empty optional) when the
// number of simple optimal paths exceeds the budget.
struct OptimalPathFamily {
  Energy level;
  std::vector<int> saddles;              // nodes at the level on optimal paths
  std::vector<std::uint64_t> masks;      // argmax-sets as bitmasks over `saddles`
  std::uint64_t paths_seen = 0;
};
std::optional<OptimalPathFamily> optimal_path_family(const EnergyGraph& g, int a, int b,
                                                     std::uint64_t path_budget = 1000000);

// Essential saddles per the argmax-set characterization, and all minimal
// gates (minimal transversals of the argmax-set family). Their union must
// coincide; the acceptance suite cross-checks that.
std::optional<std::vector<int>> essential_saddles(const EnergyGraph& g, int a, int b,
                                                  std::uint64_t path_budget = 1000000);
std::optional<std::vector<std::vector<int>>> minimal_gates(const EnergyGraph& g, int a, int b,
                                                           std::uint64_t path_budget = 1000000);

// ---------------------------------------------------------------------------
// Bounded exploration of configuration space on a real domain.
// ---------------------------------------------------------------------------

struct ExploreConstraints {
  int min_n2 = 0;
  int max_n2 = INT32_MAX;
  // Doubled-dual window every occupied site must stay in (empty = no window).
  std::optional<std::array<int, 4>> subbox;  // {duminA, dumaxA, duminB, dumaxB}
  std::size_t node_budget = 2000000;
};

struct StateGraph {
  EnergyGraph graph;
  std::vector<Configuration> states;
  std::vector<int> n2;
  Energy cap;
  bool truncated = false;  // node budget hit; results are lower bounds only

  int find(const Configuration& cfg) const;
  std::string to_json() const;

 private:
  friend StateGraph explore(const Configuration&, const Parameters&, const Energy&,
                            const ExploreConstraints&);
  std::map<std::string, int> index_;
};

// BFS closure of `start` under legal moves whose states stay at or below the
// cap and inside the constraints.
StateGraph explore(const Configuration& start, const Parameters& params, const Energy& cap,
                   const ExploreConstraints& constraints);

// g-set computation on an explored graph: nodes of `targets` reachable from
// some source by a path along which every state satisfies
// n2(target) <= n2(state) <= n2(source) and H < gamma (or <= when strict is
// false). Throws if the exploration cap lies below gamma.
std::vector<int> g_set(const StateGraph& sg, const std::vector<int>& sources,
                       const std::vector<int>& targets, const Energy& gamma, bool strict);

// ---------------------------------------------------------------------------
// Reduced exploration with a reservoir abstraction.
//
// For the modifying-path analyses the box plays no role: detached particles
// walk flat and enter/leave at the boundary for exactly their activation
// energy. States are therefore kept as a local droplet patch modulo
// translation plus counts of detached particles; summon/dismiss moves carry
// the activation cost and land/lift moves are free on lattice-connecting
// sites. Far-away free particles are normalized into the counts.
// ---------------------------------------------------------------------------

struct ReducedState {
  // Sorted (A, B, occ) triples in doubled-dual coordinates, translation
  // normalized; plus counts of detached particles of each type.
  std::vector<std::array<int, 3>> local;
  int free1 = 0;
  int free2 = 0;

  bool operator<(const ReducedState& o) const;
  bool operator==(const ReducedState& o) const;
};

struct ReducedGraph {
  EnergyGraph graph;
  std::vector<ReducedState> states;
  std::vector<int> n2;  // local + free
  Energy cap;
  bool truncated = false;
  std::map<ReducedState, int> index;

  int find(const ReducedState& s) const;
};

struct ReducedConstraints {
  int min_n2 = 0;
  int max_n2 = INT32_MAX;
  int max_extent = 8;  // occupied patch must fit in this square
  std::size_t node_budget = 4000000;
};

ReducedState reduce_configuration(const Configuration& cfg);
ReducedState reduced_from_polyomino(const DualPolyomino& poly);
Energy reduced_energy(const ReducedState& s, const Parameters& p);
DualPolyomino reduced_tile_support(const ReducedState& s);
bool reduced_is_tiled(const ReducedState& s);

ReducedGraph explore_reduced(const ReducedState& start, const Parameters& params,
                             const Energy& cap, const ReducedConstraints& constraints);

}  // namespace kwl
