#include "kwl/atlas.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kwl {

std::string region_name(Region r) {
  switch (r) {
    case Region::Outside: return "outside";
    case Region::Trivial: return "trivial";
    case Region::RT: return "RT";
    case Region::RA: return "RA";
    case Region::RB: return "RB";
    case Region::RC: return "RC";
    case Region::Fourth: return "fourth";
    case Region::Boundary: return "boundary";
  }
  return "?";
}

RegionReport classify(const Parameters& p, bool literal_ra_reading) {
  RegionReport rep{p};
  const Energy U = p.U, d1 = p.d1, d2 = p.d2;
  const Energy fourU = U * Energy(4);
  const Energy sum = d1 + d2;

  rep.metastable = Energy(0) < sum && sum < fourU;
  rep.proper = rep.metastable && d2 >= U;
  rep.subregion_ok = d1 < U && d2 - d1 > U * Energy(2) && sum < fourU;

  if (sum < fourU) rep.epsilon = fourU - sum;

  if (!rep.proper) {
    rep.region = Region::Outside;
    if (!(Energy(0) < sum)) rep.warnings.push_back("violates 0 < d1 + d2");
    if (!(sum < fourU)) rep.warnings.push_back("violates d1 + d2 < 4U");
    if (rep.metastable && d2 < U) rep.warnings.push_back("violates d2 >= U");
    return rep;
  }

  Energy eps = *rep.epsilon;
  Energy ratio = d1 / eps;
  bool integer_ratio = ratio.is_integer();
  if (!integer_ratio) rep.l_star = static_cast<int>(ratio.ceil());

  // Trivial subregion: d2 <= 4U - 2 d1, i.e. eps >= d1.
  if (d2 <= fourU - d1 * Energy(2)) {
    rep.region = Region::Trivial;
    rep.gamma_star = d1 * Energy(4) + d2 * Energy(2) - fourU;
    if (integer_ratio) rep.l_star = static_cast<int>(ratio.ceil());
    return rep;
  }

  if (!rep.subregion_ok) {
    rep.region = Region::Outside;
    rep.warnings.push_back("outside the analyzed subregion (needs d2 - d1 > 2U)");
    return rep;
  }

  if (integer_ratio) {
    rep.region = Region::Boundary;
    rep.warnings.push_back("d1/eps is an integer; l* undefined on region boundaries");
    return rep;
  }

  rep.gamma_star = gamma_star_value(p);

  // RT: l* <= 3, equivalently d2 <= 4U - (4/3) d1.
  if (d2 <= fourU - d1 * Energy(4, 3)) {
    rep.region = Region::RT;
    return rep;
  }

  const Energy threeU = U * Energy(3);
  bool in_ra = literal_ra_reading ? d1 < threeU : d2 < threeU;
  if (in_ra) {
    rep.region = Region::RA;
    if (literal_ra_reading) rep.warnings.push_back("literal RA reading d1 < 3U in effect");
  } else if (threeU < d2 && d2 < U * Energy(2) + d1 * Energy(2)) {
    rep.region = Region::RB;
  } else if (d2 > threeU + d1) {
    rep.region = Region::RC;
  } else if (d2 == threeU || d2 == U * Energy(2) + d1 * Energy(2) || d2 == threeU + d1) {
    rep.region = Region::Boundary;
    rep.warnings.push_back("on a boundary between subregions");
  } else {
    rep.region = Region::Fourth;
  }
  return rep;
}

Energy gamma_star_value(const Parameters& p) {
  const Energy fourU = p.U * Energy(4);
  if (!(p.d1 + p.d2 < fourU)) throw std::domain_error("gamma* needs d1 + d2 < 4U");
  if (p.d2 <= fourU - p.d1 * Energy(2)) {
    return p.d1 * Energy(4) + p.d2 * Energy(2) - fourU;
  }
  Energy eps = fourU - p.d1 - p.d2;
  Energy ratio = p.d1 / eps;
  if (ratio.is_integer()) throw std::domain_error("gamma* undefined: d1/eps is an integer");
  long l = ratio.ceil();
  // H(rho) for the tiled l x (l-1) rectangle, plus d1 + d2 - eps.
  Energy h_rho = p.d1 * Energy(l * (l + 1)) + (p.d2 - fourU) * Energy(l * (l - 1));
  return h_rho + p.d1 + p.d2 - eps;
}

Energy gamma_star(const Parameters& p, const Domain& dom) {
  const Energy fourU = p.U * Energy(4);
  if (p.d2 <= fourU - p.d1 * Energy(2)) {
    return p.d1 * Energy(4) + p.d2 * Energy(2) - fourU;
  }
  Energy eps = fourU - p.d1 - p.d2;
  Energy ratio = p.d1 / eps;
  if (ratio.is_integer()) throw std::domain_error("gamma* undefined: d1/eps is an integer");
  int l = static_cast<int>(ratio.ceil());
  if (dom.L() <= 2 * l + 2) throw std::invalid_argument("domain too small: needs L > 2 l* + 2");
  Site anchor = core_anchor(dom, l, l - 1);
  Configuration rho = build_standard(l * (l - 1), anchor, dom);
  return rho.energy(p) + p.d1 + p.d2 - eps;
}

Configuration build_box(const Domain& dom) { return Configuration(dom); }

namespace {

// Tiled k x k square of the given parity with lower-left tile center at the
// doubled-dual anchor; empty optional if any bond would be inactive.
std::optional<Configuration> try_square(const Domain& dom, int k, int anchorA, int anchorB) {
  Configuration cfg(dom);
  for (int u = 0; u < k; ++u) {
    for (int v = 0; v < k; ++v) {
      Site c = Site::from_doubled_dual(anchorA + 2 * u, anchorB + 2 * v);
      int id = dom.id_of(c);
      if (id < 0) return std::nullopt;
      cfg.set(id, 2);
      for (int d = 0; d < 4; ++d) {
        int j = dom.neighbor(id, d);
        if (j < 0 || cfg.occ(j) == 2) return std::nullopt;
        if (!dom.interacting_bond(id, d)) return std::nullopt;
        cfg.set(j, 1);
      }
    }
  }
  return cfg;
}

}  // namespace

std::vector<Configuration> build_boxplus(const Domain& dom) {
  const int k = dom.L() - 2;
  std::vector<Configuration> out;
  for (int parity = 0; parity < 2; ++parity) {
    std::optional<Configuration> found;
    int count = 0;
    for (int A = -(dom.L() + 1) + parity; A <= dom.L() + 2; A += 2) {
      for (int B = -(dom.L() + 1) + parity; B <= dom.L() + 2; B += 2) {
        auto cfg = try_square(dom, k, A, B);
        if (cfg) {
          found = cfg;
          ++count;
        }
      }
    }
    if (!found || count != 1)
      throw std::logic_error("checkerboard droplet placement not unique");
    if (!found->is_tiled() || found->n2() != k * k)
      throw std::logic_error("checkerboard droplet malformed");
    out.push_back(std::move(*found));
  }
  return out;
}

Configuration embed_polyomino(const DualPolyomino& poly, const Site& anchor, const Domain& dom,
                              bool allow_boundary) {
  Configuration cfg(dom);
  for (const Cell& c : poly.cells()) {
    Site center = Site::from_doubled_dual(anchor.du1() + 2 * c.u, anchor.du2() + 2 * c.v);
    if (!allow_boundary && !dom.tile_fits_interacting(center, 2))
      throw std::invalid_argument("shape collides with the non-interacting margin");
    int id = dom.id_of(center);
    if (id < 0) throw std::invalid_argument("shape leaves the domain");
    cfg.set(id, 2);
  }
  for (int i = 0; i < dom.size(); ++i)
    if (cfg.occ(i) == 2) cfg.saturate(i);
  return cfg;
}

Configuration build_standard(int n2, const Site& anchor, const Domain& dom, bool allow_boundary) {
  return embed_polyomino(standard_polyomino(n2), anchor, dom, allow_boundary);
}

Configuration build_quasi_standard(int n2, const Site& anchor, const Domain& dom,
                                   const std::vector<Site>& removed_corners) {
  Configuration cfg = build_standard(n2, anchor, dom);
  for (const Site& s : removed_corners) {
    int id = dom.id_of(s);
    if (id < 0 || cfg.occ(id) != 1 || cfg.bonds_at(id) != 1)
      throw std::invalid_argument("not a removable corner type-1");
    cfg.set(id, 0);
  }
  return cfg;
}

Site core_anchor(const Domain& dom, int width, int height, bool odd_parity) {
  for (const Site& s : dom.sites()) {
    if (s.odd() != odd_parity) continue;
    bool ok = true;
    for (int u = 0; u < width && ok; ++u) {
      for (int v = 0; v < height && ok; ++v) {
        Site c = Site::from_doubled_dual(s.du1() + 2 * u, s.du2() + 2 * v);
        ok = dom.tile_fits_interacting(c, 2);
      }
    }
    if (ok) return s;
  }
  throw std::invalid_argument("domain too small for the requested shape");
}

std::string RegionReport::to_json() const {
  nlohmann::json j;
  j["point"] = {{"U", point.U.str()}, {"d1", point.d1.str()}, {"d2", point.d2.str()}};
  j["metastable"] = metastable;
  j["proper"] = proper;
  j["subregion_ok"] = subregion_ok;
  if (epsilon)
    j["epsilon"] = epsilon->str();
  else
    j["epsilon"] = nullptr;
  if (l_star)
    j["l_star"] = *l_star;
  else
    j["l_star"] = "undefined";
  j["region"] = region_name(region);
  if (gamma_star)
    j["gamma_star"] = gamma_star->str();
  else
    j["gamma_star"] = "unavailable";
  j["warnings"] = warnings;
  return j.dump();
}

}  // namespace kwl
