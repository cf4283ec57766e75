#include <doctest.h>

#include <algorithm>
#include <set>

#include "kwl/atlas.hpp"
#include "kwl/landscape.hpp"
#include "kwl/rng.hpp"

using namespace kwl;

namespace {

// Brute-force minimax over all simple paths.
struct BruteForce {
  const EnergyGraph& g;
  int target;
  std::vector<bool> onpath;
  std::optional<Energy> best;
  std::vector<std::set<int>> argmax_sets;  // per optimal path, at the final level
  Energy level;

  explicit BruteForce(const EnergyGraph& graph) : g(graph), onpath(graph.size(), false) {}

  void dfs(int v, Energy peak) {
    peak = max(peak, g.h[v]);
    if (v == target) {
      if (!best || peak < *best) best = peak;
      return;
    }
    onpath[v] = true;
    for (int w : g.adj[v])
      if (!onpath[w]) dfs(w, peak);
    onpath[v] = false;
  }
};

std::optional<Energy> brute_phi(const EnergyGraph& g, int a, int b) {
  BruteForce bf(g);
  bf.target = b;
  bf.dfs(a, g.h[a]);
  return bf.best;
}

// All simple paths achieving the minimax, reported as their argmax sets.
std::set<std::set<int>> brute_argmax_family(const EnergyGraph& g, int a, int b, Energy level) {
  std::set<std::set<int>> fam;
  std::vector<bool> onpath(g.size(), false);
  std::vector<int> path;
  auto dfs = [&](auto&& self, int v) -> void {
    if (g.h[v] > level) return;
    path.push_back(v);
    onpath[v] = true;
    if (v == b) {
      std::set<int> am;
      for (int x : path)
        if (g.h[x] == level) am.insert(x);
      fam.insert(am);
    } else {
      for (int w : g.adj[v])
        if (!onpath[w]) self(self, w);
    }
    onpath[v] = false;
    path.pop_back();
  };
  dfs(dfs, a);
  return fam;
}

EnergyGraph chain(std::vector<int> hs) {
  EnergyGraph g;
  for (int h : hs) g.add_node(Energy(h));
  for (int i = 1; i < g.size(); ++i) g.add_edge(i - 1, i);
  return g;
}

}  // namespace

TEST_CASE("phi on a chain and a diamond") {
  EnergyGraph c = chain({0, 5, 1});
  PhiResult p = phi(c, 0, 2);
  REQUIRE(p.known());
  CHECK(*p.value == Energy(5));
  CHECK(p.witness == std::vector<int>{0, 1, 2});
  CHECK(*phi(c, 0, 0).value == Energy(0));

  // diamond: two routes peaking at 4 and 7
  EnergyGraph d;
  int a = d.add_node(Energy(0));
  int lo = d.add_node(Energy(4));
  int hi = d.add_node(Energy(7));
  int b = d.add_node(Energy(1));
  d.add_edge(a, lo);
  d.add_edge(lo, b);
  d.add_edge(a, hi);
  d.add_edge(hi, b);
  CHECK(*phi(d, a, b).value == Energy(4));
  CHECK(*brute_phi(d, a, b) == Energy(4));

  auto sad = saddle_set(d, a, b);
  REQUIRE(sad.known());
  CHECK(*sad.value == std::vector<int>{lo});
}

TEST_CASE("phi is unknown when disconnected") {
  EnergyGraph g;
  g.add_node(Energy(0));
  g.add_node(Energy(1));
  CHECK(!phi(g, 0, 1).known());
  CHECK(!saddle_set(g, 0, 1).known());
}

TEST_CASE("phi equals brute force on random graphs up to 12 nodes") {
  CounterRng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    EnergyGraph g;
    int n = 4 + static_cast<int>(rng.next_u64() % 9);
    for (int i = 0; i < n; ++i) g.add_node(Energy(static_cast<int>(rng.next_u64() % 20)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.next_u64() % 100 < 30) g.add_edge(i, j);
    int a = static_cast<int>(rng.next_u64() % n);
    int b = static_cast<int>(rng.next_u64() % n);
    PhiResult mine = phi(g, a, b);
    auto brute = brute_phi(g, a, b);
    CHECK(mine.known() == brute.has_value());
    if (mine.known()) {
      CHECK(*mine.value == *brute);
      // witness path is feasible and stays at or below the level
      REQUIRE(!mine.witness.empty());
      CHECK(mine.witness.front() == a);
      CHECK(mine.witness.back() == b);
      for (int v : mine.witness) CHECK(g.h[v] <= *mine.value);
    }
  }
}

TEST_CASE("saddle sets match brute force path enumeration") {
  CounterRng rng(555);
  for (int trial = 0; trial < 120; ++trial) {
    EnergyGraph g;
    int n = 4 + static_cast<int>(rng.next_u64() % 7);
    for (int i = 0; i < n; ++i) g.add_node(Energy(static_cast<int>(rng.next_u64() % 8)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.next_u64() % 100 < 40) g.add_edge(i, j);
    int a = 0, b = n - 1;
    PhiResult p = phi(g, a, b);
    if (!p.known()) continue;
    auto fam = brute_argmax_family(g, a, b, *p.value);
    std::set<int> expected;
    for (const auto& s : fam) expected.insert(s.begin(), s.end());
    auto got = saddle_set(g, a, b);
    REQUIRE(got.known());
    CHECK(std::set<int>(got.value->begin(), got.value->end()) == expected);
  }
}

TEST_CASE("stability level") {
  EnergyGraph c = chain({0, 5, 1});
  auto v1 = stability_level(c, 2);  // node with h=1, lower set {0}, barrier 5
  REQUIRE(v1.known());
  CHECK(*v1.value == Energy(4));
  CHECK(!stability_level(c, 0).known());  // global minimum
}

TEST_CASE("essential saddles and minimal gates on fixed toy graphs") {
  // chain: the unique saddle is essential and forms the unique minimal gate
  EnergyGraph c = chain({0, 5, 1});
  auto ess = essential_saddles(c, 0, 2);
  auto gates = minimal_gates(c, 0, 2);
  REQUIRE(ess);
  REQUIRE(gates);
  CHECK(*ess == std::vector<int>{1});
  CHECK(*gates == std::vector<std::vector<int>>{{1}});

  // two disjoint optimal routes peaking at the same height: both peaks
  // essential, two singleton minimal gates
  EnergyGraph d;
  int a = d.add_node(Energy(0));
  int s1 = d.add_node(Energy(5));
  int s2 = d.add_node(Energy(5));
  int b = d.add_node(Energy(1));
  d.add_edge(a, s1);
  d.add_edge(s1, b);
  d.add_edge(a, s2);
  d.add_edge(s2, b);
  auto ess2 = essential_saddles(d, a, b);
  auto gates2 = minimal_gates(d, a, b);
  REQUIRE(ess2);
  REQUIRE(gates2);
  CHECK(*ess2 == std::vector<int>{s1, s2});
  CHECK(gates2->size() == 1);
  CHECK((*gates2)[0] == std::vector<int>{s1, s2});

  // serial pair of saddles on one route plus a parallel single-saddle route:
  // the parallel saddle is essential; each serial saddle is too (f2), and the
  // minimal gates are {s3} plus {s3'}... constructed to exercise subset logic
  EnergyGraph e;
  int ea = e.add_node(Energy(0));
  int p1 = e.add_node(Energy(5));
  int p2 = e.add_node(Energy(5));
  int q1 = e.add_node(Energy(5));
  int eb = e.add_node(Energy(1));
  e.add_edge(ea, p1);
  e.add_edge(p1, p2);
  e.add_edge(p2, eb);
  e.add_edge(ea, q1);
  e.add_edge(q1, eb);
  auto ess3 = essential_saddles(e, ea, eb);
  REQUIRE(ess3);
  // q1 is essential: its argmax set {q1} is a singleton. p1, p2 are
  // unessential: dropping either from {p1,p2} leaves {q1} as a subset? No -
  // {q1} is not a subset of {p1} or {p2}... they are essential by (f2).
  CHECK(std::set<int>(ess3->begin(), ess3->end()) == std::set<int>{p1, p2, q1});
  auto gates3 = minimal_gates(e, ea, eb);
  REQUIRE(gates3);
  // minimal transversals of {{p1,p2},{q1}}: {p1,q1} and {p2,q1}
  CHECK(gates3->size() == 2);

  // dead-end spur at the saddle level is not essential
  EnergyGraph f = chain({0, 5, 1});
  int spur = f.add_node(Energy(5));
  f.add_edge(1, spur);
  auto ess4 = essential_saddles(f, 0, 2);
  REQUIRE(ess4);
  CHECK(*ess4 == std::vector<int>{1});
  auto gates4 = minimal_gates(f, 0, 2);
  REQUIRE(gates4);
  CHECK(*gates4 == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("lemma cross-check: essential saddles equal the union of minimal gates") {
  CounterRng rng(777);
  int done = 0;
  for (int trial = 0; trial < 400 && done < 150; ++trial) {
    EnergyGraph g;
    int n = 4 + static_cast<int>(rng.next_u64() % 8);
    for (int i = 0; i < n; ++i) g.add_node(Energy(static_cast<int>(rng.next_u64() % 6)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.next_u64() % 100 < 35) g.add_edge(i, j);
    if (!phi(g, 0, n - 1).known()) continue;
    auto ess = essential_saddles(g, 0, n - 1);
    auto gates = minimal_gates(g, 0, n - 1);
    REQUIRE(ess);
    REQUIRE(gates);
    std::set<int> u;
    for (const auto& gate : *gates) u.insert(gate.begin(), gate.end());
    CHECK(std::set<int>(ess->begin(), ess->end()) == u);
    ++done;
  }
  CHECK(done == 150);
}

TEST_CASE("path enumeration budget failure is explicit") {
  // complete graph at one level has factorially many optimal paths
  EnergyGraph g;
  for (int i = 0; i < 12; ++i) g.add_node(Energy(3));
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j) g.add_edge(i, j);
  CHECK(!optimal_path_family(g, 0, 11, 1000).has_value());
}

TEST_CASE("explore respects caps and constraints") {
  Domain dom(5);
  Parameters p = Parameters::parse("1", "0.3", "1.5");
  Configuration empty(dom);

  // cap below the cheapest creation: the box alone
  StateGraph sg = explore(empty, p, Energy(1, 4), {});
  CHECK(sg.graph.size() == 1);
  CHECK(!sg.truncated);

  // cap admitting single type-1 excursions only
  ExploreConstraints cons;
  cons.max_n2 = 0;
  StateGraph sg1 = explore(empty, p, Energy::parse("0.3"), cons);
  CHECK(sg1.graph.size() > 1);
  for (int i = 0; i < sg1.graph.size(); ++i) {
    CHECK(sg1.n2[i] == 0);
    CHECK(sg1.graph.h[i] <= Energy::parse("0.3"));
  }
  // edges are symmetric by construction
  for (int a = 0; a < sg1.graph.size(); ++a)
    for (int b : sg1.graph.adj[a])
      CHECK(std::count(sg1.graph.adj[b].begin(), sg1.graph.adj[b].end(), a) == 1);

  // explicit truncation flag on tiny budgets
  ExploreConstraints tiny;
  tiny.node_budget = 3;
  StateGraph sgt = explore(empty, p, Energy::parse("1.8"), tiny);
  CHECK(sgt.truncated);
}

TEST_CASE("explored graph contains the corner-hop relocation states") {
  Domain dom(8);
  Parameters p = Parameters::parse("1", "0.8", "2.9");
  Site c = core_anchor(dom, 2, 2);
  Configuration tile = embed_polyomino(DualPolyomino({{0, 0}}), c, dom);
  Energy cap = tile.energy(p) + p.U * Energy(3);

  // keep everything within a window around the tile
  Cell a0 = cell_of(c);
  ExploreConstraints cons;
  cons.min_n2 = 1;
  cons.max_n2 = 1;
  cons.subbox = {{2 * a0.u - 3, 2 * a0.u + 5, 2 * a0.v - 3, 2 * a0.v + 5}};
  StateGraph sg = explore(tile, p, cap, cons);
  CHECK(!sg.truncated);
  CHECK(sg.graph.size() > 100);
  CHECK(sg.find(tile) == 0);

  // the one-cell-east translate of the tile is reachable within 3U
  Configuration moved = embed_polyomino(DualPolyomino({{1, 0}}), c, dom);
  int target = sg.find(moved);
  REQUIRE(target >= 0);
  PhiResult barrier = phi(sg.graph, 0, target);
  REQUIRE(barrier.known());
  CHECK(*barrier.value - tile.energy(p) == p.U * Energy(3));
}

TEST_CASE("g-set on explored graphs") {
  // Toy check of the window semantics on a hand-built state graph.
  StateGraph sg;
  sg.cap = Energy(10);
  // nodes: (h, n2)
  auto add = [&](int h, int n2) {
    sg.graph.add_node(Energy(h));
    sg.n2.push_back(n2);
    return sg.graph.size() - 1;
  };
  int src = add(0, 3);
  int mid = add(5, 3);
  int tgt1 = add(1, 3);
  int dip = add(2, 2);  // leaves the window for target at n2=3
  int tgt2 = add(1, 3);
  sg.graph.add_edge(src, mid);
  sg.graph.add_edge(mid, tgt1);
  sg.graph.add_edge(src, dip);
  sg.graph.add_edge(dip, tgt2);

  auto g1 = g_set(sg, {src}, {tgt1, tgt2}, Energy(6), true);
  // tgt1 reachable below 6 within window [3,3]; tgt2 only via n2=2 dip
  CHECK(g1 == std::vector<int>{tgt1});
  auto g2 = g_set(sg, {src}, {tgt1, tgt2}, Energy(5), true);
  CHECK(g2.empty());  // mid blocks at h=5 under strict <5? no: h(mid)=5 not <5
  auto g3 = g_set(sg, {src}, {tgt1, tgt2}, Energy(5), false);
  CHECK(g3 == std::vector<int>{tgt1});
  // targets that are sources are their own witnesses
  auto g4 = g_set(sg, {src}, {src}, Energy(5), true);
  CHECK(g4 == std::vector<int>{src});
  CHECK_THROWS(g_set(sg, {src}, {tgt1}, Energy(11), true));
}

TEST_CASE("reduced states normalize translation and detached particles") {
  ReducedState a = reduced_from_polyomino(DualPolyomino({{0, 0}}));
  ReducedState b = reduced_from_polyomino(DualPolyomino({{3, 2}}));
  CHECK(a == b);
  CHECK(a.local.size() == 5);
  CHECK(reduced_is_tiled(a));
  CHECK(reduced_tile_support(a).area() == 1);

  Parameters p = Parameters::parse("1", "0.55", "3.05");
  // H = 4 d1 + d2 - 4U
  CHECK(reduced_energy(a, p) == p.d1 * Energy(4) + p.d2 - p.U * Energy(4));

  // a far-away detached particle is absorbed into the counts
  ReducedState c = a;
  c.local.push_back({20, 20, 1});
  std::sort(c.local.begin(), c.local.end());
  // normalization happens through the explorer entry point; emulate by
  // round-tripping through a configuration
  CHECK(c.local.size() == 6);
}

TEST_CASE("reduced exploration reaches the translated tile within 3U") {
  Parameters p = Parameters::parse("1", "0.8", "2.9");
  ReducedState start = reduced_from_polyomino(DualPolyomino({{0, 0}}));
  Energy h0 = reduced_energy(start, p);
  ReducedConstraints rc;
  rc.min_n2 = 1;
  rc.max_n2 = 1;
  rc.max_extent = 4;
  ReducedGraph rg = explore_reduced(start, p, h0 + p.U * Energy(3), rc);
  CHECK(!rg.truncated);
  // modulo translation the moved tile is the start itself; the graph must
  // instead contain intermediate states with broken tiles
  CHECK(rg.graph.size() > 30);
  int tiled_states = 0;
  for (int i = 0; i < rg.graph.size(); ++i)
    if (reduced_is_tiled(rg.states[i])) ++tiled_states;
  CHECK(tiled_states == 1);
}

TEST_CASE("paths entering the next manifold come from minimal states") {
  // Executable analogue of the entrance characterization: at an l*=2 point,
  // within the modifying-path exploration at n2 = 3, every state that can
  // afford a type-2 summon below the critical level is a minimal tiled state.
  Parameters p = Parameters::parse("1", "0.55", "3.05");
  RegionReport rep = classify(p);
  REQUIRE(rep.l_star);
  REQUIRE(*rep.l_star == 2);
  Energy gamma = *rep.gamma_star;

  ReducedState start = reduced_from_polyomino(standard_polyomino(3));
  Energy h0 = reduced_energy(start, p);
  ReducedConstraints rc;
  rc.min_n2 = 3;
  rc.max_n2 = 3;
  rc.max_extent = 6;
  ReducedGraph rg = explore_reduced(start, p, gamma, rc);
  REQUIRE(!rg.truncated);
  int can_enter = 0;
  for (int i = 0; i < rg.graph.size(); ++i) {
    if (rg.graph.h[i] + p.d2 > gamma) continue;  // summon unaffordable
    ++can_enter;
    CHECK(rg.graph.h[i] == h0);
    CHECK(reduced_is_tiled(rg.states[i]));
  }
  CHECK(can_enter > 0);
}
