#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kwl/config.hpp"
#include "kwl/geometry.hpp"

namespace kwl {

enum class Region { Outside, Trivial, RT, RA, RB, RC, Fourth, Boundary };
std::string region_name(Region r);

// Classification of a parameter point plus its derived quantities.
struct RegionReport {
  Parameters point;
  bool metastable = false;    // 0 < d1 + d2 < 4U
  bool proper = false;        // metastable and d2 >= U
  bool subregion_ok = false;  // d1 < U, d2 - d1 > 2U, d1 + d2 < 4U
  std::optional<Energy> epsilon;       // 4U - d1 - d2 when positive
  std::optional<int> l_star;           // ceil(d1 / eps) when defined
  Region region = Region::Outside;
  std::optional<Energy> gamma_star;    // closed forms when available
  std::vector<std::string> warnings;

  std::string to_json() const;
};

// Region labels follow these readings: the trivial subregion is
// d2 <= 4U - 2 d1 inside the proper region; RT is d2 <= 4U - (4/3) d1
// (equivalently l* <= 3); RA is d2 < 3U (see the ledger on the printed
// "d1 < 3U"); RB is 3U < d2 < 2U + 2 d1; RC is d2 > 3U + d1; anything else
// inside the subregion is the unresolved fourth subregion. Precedence:
// trivial > RT > {RA, RB, RC} > fourth.
RegionReport classify(const Parameters& p, bool literal_ra_reading = false);

// Energy of the critical droplets. In the trivial subregion this is the
// closed form 4 d1 + 2 d2 - 4U; otherwise it is obtained by building the
// standard l* x (l*-1) rectangle deep in the core and returning
// H(rho) + d1 + d2 - eps. Throws when the domain cannot hold the rectangle
// (needs L > 2 l* + 2).
Energy gamma_star(const Parameters& p, const Domain& dom);
// Closed form without a domain (same value).
Energy gamma_star_value(const Parameters& p);

// The empty configuration.
Configuration build_box(const Domain& dom);

// The two maximal checkerboard droplets (one per parity offset), each a
// tiled (L-2) x (L-2) dual square with every bond active.
std::vector<Configuration> build_boxplus(const Domain& dom);

// Tiled configuration whose support is the standard polyomino with n2 cells,
// anchored so the lower-left tile is centered at `anchor`. The anchor parity
// selects the droplet parity. Placement must keep every tile inside the
// interacting region with the default margin unless `allow_boundary`.
Configuration build_standard(int n2, const Site& anchor, const Domain& dom,
                             bool allow_boundary = false);

// Standard configuration minus the given corner type-1 particles (each must
// hold exactly one active bond).
Configuration build_quasi_standard(int n2, const Site& anchor, const Domain& dom,
                                   const std::vector<Site>& removed_corners);

// Embeds an arbitrary polyomino as a fully saturated tiled configuration,
// cell (0,0) centered at `anchor`.
Configuration embed_polyomino(const DualPolyomino& poly, const Site& anchor, const Domain& dom,
                              bool allow_boundary = false);

// A site suitable as a deep-core anchor for shapes up to the given extent.
Site core_anchor(const Domain& dom, int width, int height, bool odd_parity = false);

}  // namespace kwl
