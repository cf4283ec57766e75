#include <doctest.h>

#include "kwl/atlas.hpp"
#include "kwl/config.hpp"
#include "kwl/dynamics.hpp"
#include "kwl/rng.hpp"
#include "oracles.hpp"

using namespace kwl;

namespace {

Parameters trivial_point(double beta = 0.0) { return Parameters::parse("1", "0.3", "1.5", beta); }

// Tile centered deep in the interacting core.
Site core_center(const Domain& dom) {
  for (const Site& s : dom.sites()) {
    if ((s.x1 + s.x2) % 2 == 0 && dom.tile_fits_interacting(s, 2)) return s;
  }
  throw std::runtime_error("domain too small for a core tile");
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS(Parameters::parse("1", "2", "1"));    // d1 > d2
  CHECK_THROWS(Parameters::parse("0", "1", "2"));    // U = 0
  CHECK_THROWS(Parameters::parse("1", "0", "1"));    // d1 = 0
  CHECK_NOTHROW(Parameters::parse("1", "0.5", "0.5"));
}

TEST_CASE("empty configuration has zero energy") {
  Domain dom(6);
  Configuration cfg(dom);
  CHECK(cfg.energy(trivial_point()) == Energy(0));
  CHECK(cfg.n1() == 0);
  CHECK(cfg.n2() == 0);
  CHECK(cfg.tile_support().empty());
  CHECK(cfg.is_tiled());
}

TEST_CASE("single saturated tile deep in the core") {
  Domain dom(6);
  Configuration cfg(dom);
  Site c = core_center(dom);
  cfg.set_at(c, 2);
  cfg.saturate(dom.id_of(c));
  CHECK(cfg.n1() == 4);
  CHECK(cfg.n2() == 1);
  CHECK(cfg.active_bonds() == 4);
  CHECK(cfg.is_tiled());
  // H = 4 d1 + d2 - 4U = -1.3 at (1, 0.3, 1.5)
  CHECK(cfg.energy(trivial_point()) == Energy::parse("-1.3"));
  CHECK(cfg.t_statistic() == 12);
  CHECK(cfg.tile_support().area() == 1);
}

TEST_CASE("lone type-1 has energy d1, bonds outside the interacting set do not count") {
  Domain dom(6);
  Parameters p = trivial_point();
  Configuration cfg(dom);
  cfg.set(0, 1);
  CHECK(cfg.energy(p) == p.d1);

  // A saturated tile centered within distance 2 of the inner boundary: all
  // four bonds fall outside the interacting set, so H = 4 d1 + d2.
  Configuration near(dom);
  int center = -1;
  for (int i = 0; i < dom.size(); ++i) {
    bool ok = dom.lattice_dist_to_inner_boundary(i) <= 2 && !dom.inner_boundary(i);
    if (!ok) continue;
    bool neighbors_in = true;
    for (int d = 0; d < 4; ++d) neighbors_in = neighbors_in && dom.neighbor(i, d) >= 0;
    if (neighbors_in) {
      center = i;
      break;
    }
  }
  REQUIRE(center >= 0);
  near.set(center, 2);
  near.saturate(center);
  CHECK(near.active_bonds() == 0);
  CHECK(near.energy(p) == p.d1 * Energy(4) + p.d2);
  CHECK(!near.is_tiled());
}

TEST_CASE("saturation of a lone type-2 drops energy by 4U - 4 d1") {
  Domain dom(6);
  Parameters p = trivial_point();
  Configuration cfg(dom);
  Site c = core_center(dom);
  cfg.set_at(c, 2);
  Energy before = cfg.energy(p);
  cfg.saturate(dom.id_of(c));
  CHECK(cfg.energy(p) - before == p.d1 * Energy(4) - p.U * Energy(4));

  Configuration bad(dom);
  bad.set_at(c, 2);
  Site n{c.x1 + 1, c.x2};
  bad.set_at(n, 2);
  CHECK_THROWS_WITH(bad.saturate(dom.id_of(c)),
                    doctest::Contains("cannot saturate"));
}

TEST_CASE("gibbs weights") {
  Domain dom(5);
  Configuration cfg(dom);
  cfg.set(0, 1);
  Parameters cold = trivial_point(0.0);
  CHECK(cfg.gibbs_weight(cold) == 1.0);
  Parameters warm = trivial_point(2.0);
  Configuration other(dom);
  other.set(1, 1);
  other.set(2, 1);
  double ratio = other.gibbs_weight(warm) / cfg.gibbs_weight(warm);
  CHECK(ratio ==
        doctest::Approx(std::exp(-warm.beta * (other.energy_d(warm) - cfg.energy_d(warm)))));
}

TEST_CASE("incremental counts match recount after random walks") {
  Domain dom(6);
  Parameters p = trivial_point(1.0);
  Configuration cfg(dom);
  CounterRng rng(42);
  Energy tracked = cfg.energy(p);
  for (int step = 0; step < 10000; ++step) {
    auto moves = legal_moves(cfg);
    REQUIRE(!moves.empty());
    const Move& m = moves[rng.next_u64() % moves.size()];
    tracked += delta_h(cfg, m, p);
    apply_move(cfg, m);
    if (step % 500 == 0) CHECK(cfg.counts_consistent());
  }
  CHECK(cfg.counts_consistent());
  CHECK(cfg.energy(p) == tracked);
}

TEST_CASE("tiled energy differences follow the T statistic") {
  // For tiled shapes with equal n2, H(a) - H(b) = (T(a) - T(b)) d1 / 4,
  // and T is a multiple of 4.
  Domain dom(14);
  Parameters p = trivial_point();
  Site c = core_center(dom);
  for (int n = 1; n <= 8; ++n) {
    Energy href;
    int tref = 0;
    bool have_ref = false;
    for (const DualPolyomino& poly : oracle::all_polyominoes(n)) {
      Configuration cfg = embed_polyomino(poly, c, dom);
      REQUIRE(cfg.is_tiled());
      int t = cfg.t_statistic();
      CHECK(t % 4 == 0);
      CornerCensus cc = poly.corner_census();
      CHECK(t == 2 * poly.perimeter() + 4 * (cc.clusters - cc.holes));
      Energy h = cfg.energy(p);
      if (!have_ref) {
        href = h;
        tref = t;
        have_ref = true;
      } else {
        CHECK(h - href == Energy(t - tref) * p.d1 / Energy(4));
      }
    }
  }
}

TEST_CASE("broken bonds and extra particles against the standard reference") {
  Domain dom(12);
  Site c = core_center(dom);
  Configuration std12 = build_standard(12, c, dom);
  CHECK(std12.n2() == 12);
  CHECK(std12.active_bonds() == 48);
  CHECK(std12.n1() == 20);
  CHECK(std12.broken_bonds() == 0);
  CHECK(std12.extra_type1() == 0);

  // Remove one corner type-1: one broken bond, one fewer type-1.
  Configuration chipped = std12;
  int corner = -1;
  for (int i = 0; i < dom.size(); ++i)
    if (chipped.occ(i) == 1 && chipped.bonds_at(i) == 1) corner = i;
  REQUIRE(corner >= 0);
  chipped.set(corner, 0);
  CHECK(chipped.broken_bonds() == 1);
  CHECK(chipped.extra_type1() == -1);

  // One free type-1 on top: zero broken bonds, one extra particle.
  Configuration plus = std12;
  int free_site = -1;
  for (int i = 0; i < dom.size(); ++i) {
    if (plus.occ(i) == 0 && plus.neighbor_count(i, 1) == 0 && plus.neighbor_count(i, 2) == 0) {
      free_site = i;
      break;
    }
  }
  REQUIRE(free_site >= 0);
  plus.set(free_site, 1);
  CHECK(plus.broken_bonds() == 0);
  CHECK(plus.extra_type1() == 1);

  CHECK_THROWS(minimal_reference(-1));
}

TEST_CASE("good dual corners beside an external two-tile bar") {
  Domain dom(12);
  Site c = core_center(dom);
  // A row of four tiles with a two-tile bar on top: the two slots flanking
  // the bar are concave corners with exactly three type-1 neighbors.
  Configuration cfg =
      embed_polyomino(DualPolyomino({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {1, 1}, {2, 1}}), c, dom);
  REQUIRE(cfg.is_tiled());
  auto corners = cfg.good_dual_corners();
  CHECK(corners.size() == 2);
  Cell a0 = cell_of(c);
  for (int id : corners) {
    CHECK(cfg.occ(id) == 0);
    CHECK(cfg.neighbor_count(id, 1) == 3);
    Cell got = cell_of(dom.site(id));
    CHECK((got == Cell{a0.u, a0.v + 1} || got == Cell{a0.u + 3, a0.v + 1}));
  }

  // A bare straight bar has no concave corner.
  Configuration bare = embed_polyomino(DualPolyomino({{0, 0}, {1, 0}}), c, dom);
  CHECK(bare.good_dual_corners().empty());
}

TEST_CASE("lattice connectivity") {
  Domain dom(6);
  Configuration cfg(dom);
  for (int i = 0; i < dom.size(); ++i) CHECK(cfg.lattice_connecting(i));

  // Enclose a site with a full tile ring: the center is cut off.
  Site c = core_center(dom);
  Configuration ring(dom);
  ring.set_at(c, 2);
  ring.saturate(dom.id_of(c));
  ring.set_at(c, 0);
  CHECK(!ring.lattice_connecting(dom.id_of(c)));
}

TEST_CASE("configuration json round trip") {
  Domain dom(6);
  Configuration cfg(dom);
  Site c = core_center(dom);
  cfg.set_at(c, 2);
  cfg.saturate(dom.id_of(c));
  Configuration back = Configuration::from_json(cfg.to_json(), dom);
  CHECK(back == cfg);
  CHECK(back.n1() == cfg.n1());
  CHECK(back.active_bonds() == cfg.active_bonds());
}
