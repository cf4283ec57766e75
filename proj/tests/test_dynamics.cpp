#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "kwl/dynamics.hpp"
#include "kwl/harness.hpp"
#include "kwl/rng.hpp"

using namespace kwl;

namespace {

Parameters trivial_point(double beta = 0.0) { return Parameters::parse("1", "0.3", "1.5", beta); }

}  // namespace

TEST_CASE("empty box offers exactly two creations per boundary site") {
  Domain dom(5);
  Configuration empty(dom);
  auto moves = legal_moves(empty);
  size_t k = dom.inner_boundary_ids().size();
  CHECK(moves.size() == 2 * k);
  for (const Move& m : moves) {
    CHECK((m.kind == MoveKind::Create1 || m.kind == MoveKind::Create2));
    CHECK(dom.inner_boundary(m.to));
  }
}

TEST_CASE("lone core type-2 has four hops plus boundary creations") {
  Domain dom(5);
  Configuration cfg(dom);
  int core = -1;
  for (int i = 0; i < dom.size() && core < 0; ++i) {
    bool inside = !dom.inner_boundary(i);
    for (int d = 0; d < 4 && inside; ++d) inside = dom.neighbor(i, d) >= 0;
    if (inside) core = i;
  }
  REQUIRE(core >= 0);
  cfg.set(core, 2);
  auto moves = legal_moves(cfg);
  size_t k = dom.inner_boundary_ids().size();
  int hops = 0;
  for (const Move& m : moves)
    if (m.kind == MoveKind::Hop) ++hops;
  CHECK(hops == 4);
  CHECK(moves.size() == 2 * k + 4);
}

TEST_CASE("boundary type-1 can annihilate and hop inward") {
  Domain dom(5);
  Configuration cfg(dom);
  int b = dom.inner_boundary_ids()[0];
  cfg.set(b, 1);
  auto moves = legal_moves(cfg);
  bool has_annih = false, has_hop = false;
  for (const Move& m : moves) {
    if (m.kind == MoveKind::Annihilate1 && m.to == b) has_annih = true;
    if (m.kind == MoveKind::Hop && m.from == b) has_hop = true;
  }
  CHECK(has_annih);
  CHECK(has_hop);
}

TEST_CASE("move enumeration is involutive") {
  Domain dom(5);
  Configuration cfg(dom);
  CounterRng rng(7);
  for (int step = 0; step < 300; ++step) {
    auto moves = legal_moves(cfg);
    const Move& m = moves[rng.next_u64() % moves.size()];
    Configuration next = cfg;
    apply_move(next, m);
    Move rev = reverse_move(m);
    auto next_moves = legal_moves(next);
    CHECK(std::count(next_moves.begin(), next_moves.end(), rev) == 1);
    Configuration back = next;
    apply_move(back, rev);
    CHECK(back == cfg);
    cfg = next;
  }
}

TEST_CASE("hops conserve particle counts; reservoir moves change one by one") {
  Domain dom(5);
  Configuration cfg(dom);
  CounterRng rng(99);
  for (int step = 0; step < 500; ++step) {
    auto moves = legal_moves(cfg);
    const Move& m = moves[rng.next_u64() % moves.size()];
    int n1 = cfg.n1(), n2 = cfg.n2();
    apply_move(cfg, m);
    switch (m.kind) {
      case MoveKind::Hop:
        CHECK(cfg.n1() == n1);
        CHECK(cfg.n2() == n2);
        break;
      case MoveKind::Create1: CHECK(cfg.n1() == n1 + 1); break;
      case MoveKind::Create2: CHECK(cfg.n2() == n2 + 1); break;
      case MoveKind::Annihilate1: CHECK(cfg.n1() == n1 - 1); break;
      case MoveKind::Annihilate2: CHECK(cfg.n2() == n2 - 1); break;
    }
    if (m.kind != MoveKind::Hop) CHECK(dom.inner_boundary(m.to));
  }
}

TEST_CASE("metropolis rates") {
  Domain dom(5);
  Parameters p = trivial_point(2.0);
  Configuration cfg(dom);
  int b = dom.inner_boundary_ids()[0];
  Move create2{MoveKind::Create2, -1, b};
  CHECK(rate(cfg, create2, p) == doctest::Approx(std::exp(-2.0 * 1.5)));
  apply_move(cfg, create2);
  // Annihilation at the boundary is downhill.
  CHECK(rate(cfg, {MoveKind::Annihilate2, -1, b}, p) == 1.0);
  CHECK_THROWS(rate(cfg, create2, p));  // now illegal

  Parameters b0 = trivial_point(0.0);
  Configuration any(dom);
  for (const Move& m : legal_moves(any)) CHECK(rate(any, m, b0) == 1.0);
}

TEST_CASE("detailed balance holds exactly on sampled communicating pairs") {
  Domain dom(5);
  int point = 0;
  for (const char* d2 : {"1.5", "2.9", "3.4"}) {
    Parameters p = Parameters::parse("1", "0.4", d2, 3.0);
    Configuration cfg(dom);
    CounterRng rng(1000 + point++);
    std::vector<std::pair<Configuration, Move>> pairs;
    while (pairs.size() < 1000) {
      auto moves = legal_moves(cfg);
      const Move& m = moves[rng.next_u64() % moves.size()];
      pairs.push_back({cfg, m});
      apply_move(cfg, m);
    }
    BalanceReport rep = detailed_balance_check(pairs, p);
    CHECK(rep.checked == 1000);
    CHECK(rep.failures == 0);
  }
}

TEST_CASE("detailed balance rejects non-communicating pairs") {
  Domain dom(5);
  Parameters p = trivial_point(1.0);
  Configuration cfg(dom);
  Move illegal{MoveKind::Annihilate1, -1, dom.inner_boundary_ids()[0]};
  CHECK_THROWS(detailed_balance_check({{cfg, illegal}}, p));
}

TEST_CASE("kmc stops immediately when the predicate already holds") {
  Domain dom(5);
  Parameters p = trivial_point(2.0);
  Configuration cfg(dom);
  Trajectory t = kmc_run(cfg, p, [](const Configuration&) { return true; }, 1e9, 42, true);
  CHECK(t.hit);
  CHECK(t.final_time == 0.0);
  CHECK(t.events.empty());
}

TEST_CASE("kmc trajectories replay bit-exactly from the seed") {
  Domain dom(5);
  Parameters p = trivial_point(3.0);
  Configuration cfg(dom);
  auto stop = [](const Configuration& c) { return c.n2() >= 2; };
  Trajectory a = kmc_run(cfg, p, stop, 1e9, 1234, true);
  Trajectory b = kmc_run(cfg, p, stop, 1e9, 1234, true);
  CHECK(a.hit);
  CHECK(a.final_time == b.final_time);
  REQUIRE(a.events.size() == b.events.size());
  for (size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].t == b.events[i].t);
    CHECK(a.events[i].move == b.events[i].move);
  }
  for (size_t i = 1; i < a.events.size(); ++i) CHECK(a.events[i].t > a.events[i - 1].t);
  Trajectory c = kmc_run(cfg, p, stop, 1e9, 4321, true);
  CHECK(c.final_time != a.final_time);
}

TEST_CASE("kmc requires positive beta and respects max_time") {
  Domain dom(5);
  Configuration cfg(dom);
  CHECK_THROWS(
      kmc_run(cfg, trivial_point(0.0), [](const Configuration&) { return false; }, 1.0, 1, false));
  Trajectory t = kmc_run(cfg, trivial_point(6.0),
                         [](const Configuration& c) { return c.n2() >= 50; }, 0.5, 1, false);
  CHECK(!t.hit);
  CHECK(t.final_time == 0.5);
}

TEST_CASE("reservoir multiplicity counts exterior bonds") {
  Domain dom(5);
  Parameters p = trivial_point(1.0);
  Configuration cfg(dom);
  int corner = -1, edge = -1;
  for (int b : dom.inner_boundary_ids()) {
    if (dom.reservoir_bonds(b) >= 2 && corner < 0) corner = b;
    if (dom.reservoir_bonds(b) == 1 && edge < 0) edge = b;
  }
  REQUIRE(corner >= 0);
  REQUIRE(edge >= 0);
  CHECK(move_multiplicity(cfg, {MoveKind::Create1, -1, corner}, p) == dom.reservoir_bonds(corner));
  CHECK(move_multiplicity(cfg, {MoveKind::Create1, -1, edge}, p) == 1);
  Parameters uniform = p;
  uniform.reservoir = ReservoirMultiplicity::Uniform;
  CHECK(move_multiplicity(cfg, {MoveKind::Create1, -1, corner}, uniform) == 1);
  CHECK(move_multiplicity(cfg, {MoveKind::Hop, 0, dom.neighbor(0, 0)}, p) == 1);
}

TEST_CASE("trajectory jsonl stream") {
  Domain dom(5);
  Parameters p = trivial_point(2.0);
  Configuration cfg(dom);
  Trajectory t = kmc_run(cfg, p, [](const Configuration& c) { return c.n1() + c.n2() >= 2; },
                         1e9, 77, true);
  std::string jl = t.to_jsonl(dom);
  CHECK(jl.find("\"t\":") != std::string::npos);
  CHECK(std::count(jl.begin(), jl.end(), '\n') == static_cast<long>(t.events.size()));
}
