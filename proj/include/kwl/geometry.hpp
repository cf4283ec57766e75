#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kwl/rational.hpp"

namespace kwl {

// ---------------------------------------------------------------------------
// Sites and coordinates.
//
// A site lives on Z^2 in standard coordinates (x1, x2). Its dual coordinates
// are u1 = (x1 - x2)/2, u2 = (x1 + x2)/2, which are both integers for even
// sites and both half-integers for odd sites. Internally dual coordinates are
// carried doubled (du = 2u) so everything stays integral.
// ---------------------------------------------------------------------------

struct Site {
  int x1 = 0;
  int x2 = 0;

  int du1() const { return x1 - x2; }  // 2 * u1
  int du2() const { return x1 + x2; }  // 2 * u2

  static Site from_doubled_dual(int du1, int du2) {
    // du1 and du2 always share parity for lattice sites.
    return Site{(du1 + du2) / 2, (du2 - du1) / 2};
  }

  bool odd() const { return ((x1 + x2) & 1) != 0; }

  friend bool operator==(const Site& a, const Site& b) { return a.x1 == b.x1 && a.x2 == b.x2; }
  friend bool operator!=(const Site& a, const Site& b) { return !(a == b); }
  friend bool operator<(const Site& a, const Site& b) {
    return a.x1 != b.x1 ? a.x1 < b.x1 : a.x2 < b.x2;
  }
};

inline std::pair<Rational, Rational> to_dual(const Site& s) {
  return {Rational(s.x1 - s.x2, 2), Rational(s.x1 + s.x2, 2)};
}

inline bool adjacent(const Site& a, const Site& b) {
  int d = std::abs(a.x1 - b.x1) + std::abs(a.x2 - b.x2);
  return d == 1;
}

// Standard-lattice neighbor offsets in the fixed enumeration order used
// everywhere (N, E, S, W in standard coordinates).
inline constexpr std::array<std::pair<int, int>, 4> kNeighborOffsets = {
    {{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};

// Particle parity: (x1 + x2 + occupancy) mod 2, with 1 -> odd, 0 -> even.
enum class Parity { Even, Odd };
Parity particle_parity(const Site& s, int occupancy);

// The five sites of the tile centered at a site, labelled e (center) then
// a,b,c,d for the junction sites. The junction labels follow N,E,S,W reading
// order; nothing downstream depends on which junction carries which letter.
struct Tile {
  Site e, a, b, c, d;
  std::array<Site, 5> all() const { return {e, a, b, c, d}; }
  std::array<Site, 4> junctions() const { return {a, b, c, d}; }
};
Tile tile(const Site& center);

// ---------------------------------------------------------------------------
// Dual polyominoes (tile supports).
//
// Cells are indexed by integer pairs after a global half-unit shift: the
// footprint of a tile centered at dual (u1, u2) is the cell
// (floor(u1), floor(u2)). Connectivity is 4-adjacency on cells.
// ---------------------------------------------------------------------------

struct Cell {
  int u = 0;
  int v = 0;
  friend bool operator==(const Cell& a, const Cell& b) { return a.u == b.u && a.v == b.v; }
  friend bool operator<(const Cell& a, const Cell& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  }
};

// Tile footprint cell of a site: (floor(u1), floor(u2)).
inline Cell cell_of(const Site& s) {
  auto fl = [](int doubled) { return doubled >= 0 ? doubled / 2 : (doubled - 1) / 2; };
  return {fl(s.du1()), fl(s.du2())};
}

struct CornerCensus {
  int convex = 0;      // psi
  int concave = 0;     // phi
  int clusters = 0;    // C
  int holes = 0;       // Q
};

class DualPolyomino {
 public:
  DualPolyomino() = default;
  explicit DualPolyomino(std::vector<Cell> cells);

  static DualPolyomino rectangle(int w, int h, Cell origin = {0, 0});

  const std::vector<Cell>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }
  int area() const { return static_cast<int>(cells_.size()); }
  bool contains(const Cell& c) const;

  // Total boundary length, inner hole boundaries included:
  // P = 4*area - 2*(adjacent cell pairs).
  int perimeter() const;

  // Corner classification on dual grid vertices: a vertex touched by exactly
  // one cell is convex, by exactly three cells is concave, and by two cells
  // meeting diagonally contributes two concave corners. Satisfies
  // psi - phi = 4 (C - Q).
  CornerCensus corner_census() const;

  // Components under edge adjacency (the polyomino notion) or, when
  // vertex_connectivity is set, under vertex adjacency (the particle-cluster
  // notion used by the corner census).
  int cluster_count(bool vertex_connectivity = false) const;
  int hole_count() const;
  bool connected() const;

  // Pair (width, height) of the circumscribing rectangle.
  std::pair<int, int> circumscribing_rectangle() const;

  // Monotone: perimeter equals the perimeter of the circumscribing rectangle.
  bool is_monotone() const;

  // Standard: a quasi-square (side lengths differing by at most one) with
  // possibly a bar attached to one of its longest sides.
  bool is_standard() const;

  DualPolyomino translated(int du, int dv) const;
  // Translation-normalized form (min corner at the origin).
  DualPolyomino normalized() const;
  // The 8 images under the dihedral group, each translation-normalized.
  std::vector<DualPolyomino> symmetry_images() const;
  // Lexicographically minimal cell list over the chosen group.
  DualPolyomino canonical_translation() const { return normalized(); }
  DualPolyomino canonical_free() const;
  DualPolyomino canonical_one_sided() const;
  // Order of the symmetry stabilizer subgroup (1, 2, 4 or 8).
  int symmetry_order() const;

  // JSON array of sorted [u, v] pairs.
  std::string to_json() const;
  static DualPolyomino from_json(const std::string& text);

  friend bool operator==(const DualPolyomino& a, const DualPolyomino& b) {
    return a.cells_ == b.cells_;
  }
  friend bool operator<(const DualPolyomino& a, const DualPolyomino& b) {
    return a.cells_ < b.cells_;
  }

 private:
  std::vector<Cell> cells_;  // sorted, unique
};

// Standard polyomino with n cells: quasi-square plus a bar on a longest side.
// Used to anchor minimal-energy references and standard configurations.
DualPolyomino standard_polyomino(int n);

// ---------------------------------------------------------------------------
// Domain: the rhombus-shaped box.
//
// Lambda is the (L + 3/2) x (L + 3/2) dual square with bottom-left corner at
// dual (-(L+1)/2, -(L+1)/2). Interacting bonds are the nearest-neighbor bonds
// whose endpoints both have Euclidean distance > 2 from every site of the
// inner boundary.
// ---------------------------------------------------------------------------

class Domain {
 public:
  explicit Domain(int L);

  int L() const { return L_; }
  int size() const { return static_cast<int>(sites_.size()); }

  const std::vector<Site>& sites() const { return sites_; }
  Site site(int id) const { return sites_[id]; }
  int id_of(const Site& s) const;           // -1 if outside Lambda
  bool contains(const Site& s) const { return id_of(s) >= 0; }

  // Neighbor site id in direction d (kNeighborOffsets order), -1 if outside.
  int neighbor(int id, int d) const { return neighbors_[id][d]; }
  const std::array<int, 4>& neighbors(int id) const { return neighbors_[id]; }

  bool inner_boundary(int id) const { return inner_boundary_[id]; }  // in d^- Lambda
  bool in_core(int id) const { return !inner_boundary_[id]; }        // in Lambda^-
  bool in_core2(int id) const { return core2_[id]; }                 // in (Lambda^-)^-
  // Both endpoints far enough from the inner boundary for the bond to count.
  bool interacting_site(int id) const { return far3_[id]; }
  bool interacting_bond(int id, int d) const {
    int n = neighbors_[id][d];
    return n >= 0 && far3_[id] && far3_[n];
  }

  // Number of reservoir bonds at an inner-boundary site: its neighbors in
  // d^+ Lambda. Zero for non-boundary sites.
  int reservoir_bonds(int id) const { return reservoir_bonds_[id]; }

  const std::vector<int>& inner_boundary_ids() const { return inner_boundary_ids_; }

  // Squared Euclidean distance to the nearest inner-boundary site.
  int dist2_to_inner_boundary(int id) const { return dist2_boundary_[id]; }
  // l^1 (lattice) distance to the nearest inner-boundary site.
  int lattice_dist_to_inner_boundary(int id) const { return latdist_boundary_[id]; }

  // Site whose tile (center + 4 junctions) lies fully in the interacting
  // region with the given extra lattice-distance margin.
  bool tile_fits_interacting(const Site& center, int extra_margin) const;

 private:
  int L_;
  int dumin_, dumax_;  // doubled-dual coordinate range
  std::vector<Site> sites_;
  std::vector<int> grid_;  // (A,B) doubled-dual -> id
  std::vector<std::array<int, 4>> neighbors_;
  std::vector<bool> inner_boundary_;
  std::vector<bool> core2_;
  std::vector<bool> far3_;
  std::vector<int> reservoir_bonds_;
  std::vector<int> dist2_boundary_;
  std::vector<int> latdist_boundary_;
  std::vector<int> inner_boundary_ids_;

  int grid_index(int A, int B) const;
};

}  // namespace kwl
