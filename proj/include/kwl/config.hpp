#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kwl/geometry.hpp"
#include "kwl/rational.hpp"

namespace kwl {

// How many reservoir channels a boundary creation/annihilation carries.
// The default ties rates to the bonds between the site and the exterior;
// Uniform treats every boundary site as one channel.
enum class ReservoirMultiplicity { PerBond, Uniform };

struct Parameters {
  Energy U;
  Energy d1;
  Energy d2;
  double beta = 0.0;
  ReservoirMultiplicity reservoir = ReservoirMultiplicity::PerBond;

  Parameters(Energy u, Energy delta1, Energy delta2, double beta_ = 0.0);
  static Parameters parse(const std::string& u, const std::string& delta1,
                          const std::string& delta2, double beta = 0.0);

  double u_d() const { return U.to_double(); }
  double d1_d() const { return d1.to_double(); }
  double d2_d() const { return d2.to_double(); }
};

// Lattice state eta in {0,1,2}^Lambda with cached particle counts and the
// number of active bonds inside the interacting bond set. Value type: copy
// freely, mutate only exclusively owned copies.
class Configuration {
 public:
  explicit Configuration(const Domain& dom);

  const Domain& domain() const { return *dom_; }

  int occ(int site_id) const { return occ_[site_id]; }
  int occ_at(const Site& s) const;
  void set(int site_id, int value);
  void set_at(const Site& s, int value);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int active_bonds() const { return bonds_; }
  bool empty() const { return n1_ == 0 && n2_ == 0; }

  // Active bonds incident to the particle at the site.
  int bonds_at(int site_id) const;
  // Number of neighbors holding the given occupancy value.
  int neighbor_count(int site_id, int value) const;

  Energy energy(const Parameters& p) const;
  double energy_d(const Parameters& p) const;
  // Unnormalized Gibbs weight exp(-beta H).
  double gibbs_weight(const Parameters& p) const;

  // Full recount of n1/n2/bonds from the occupancy array (test support).
  void recount();
  bool counts_consistent() const;

  // Every type-2 particle holds four active bonds and every type-1 particle
  // at least one.
  bool is_tiled() const;

  DualPolyomino tile_support() const;

  // T = 2P + (psi - phi); requires a tiled configuration.
  int t_statistic() const;

  Parity parity_at(int site_id) const;

  // Empty sites having exactly three type-1 neighbors.
  std::vector<int> good_dual_corners() const;

  // True when a path of empty sites (start excluded) connects the site to
  // the inner boundary.
  bool lattice_connecting(int site_id) const;
  std::vector<bool> lattice_connecting_all() const;

  // Fills the empty neighbors of a type-2 site with type-1 particles.
  // Rejects sites whose neighborhood holds another type-2.
  void saturate(int site_id);

  // Deviation from the minimal-energy reference at the same n2:
  // broken bonds = B_min - B, extra type-1 = n1 - n1_min.
  int broken_bonds() const;
  int extra_type1() const;

  // JSON round-trip: {"L": ..., "occupancy": "<rle>"} with runs encoded as
  // "digit:count" in site-id order.
  std::string to_json() const;
  static Configuration from_json(const std::string& text, const Domain& dom);

  std::string occupancy_key() const;  // raw byte key for hashing

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.occ_ == b.occ_;
  }

 private:
  const Domain* dom_;
  std::vector<std::uint8_t> occ_;
  int n1_ = 0;
  int n2_ = 0;
  int bonds_ = 0;
};

// Minimal-energy reference for a given n2 (12-tiled standard shape):
// B_min = 4 n2 and n1_min = n2 + T(standard)/4.
struct MinimalReference {
  int b_min = 0;
  int n1_min = 0;
};
MinimalReference minimal_reference(int n2);

}  // namespace kwl
