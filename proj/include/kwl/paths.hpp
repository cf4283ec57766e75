#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kwl/config.hpp"
#include "kwl/dynamics.hpp"

namespace kwl {

// Thrown when a builder's geometric preconditions fail; the message names
// the first violated requirement.
class CertificateError : public std::runtime_error {
 public:
  explicit CertificateError(const std::string& what) : std::runtime_error(what) {}
};

// An explicit move sequence with per-state energies and a proven barrier.
struct PathCertificate {
  Configuration start;
  Configuration end;
  std::vector<Move> moves;
  std::vector<Energy> energies;  // energies[i] before moves[i]; size moves+1
  Energy barrier;                // max(energies) - energies[0]

  // Replays the moves against a fresh copy of `start`: every move must be
  // legal, the recorded energies must match from-scratch evaluation, the
  // visited configurations must be pairwise distinct, and the declared
  // barrier must equal the observed one. Throws on any mismatch.
  void verify(const Parameters& params) const;

  std::string to_json(const Parameters& params) const;  // replayable move script
};

// Tile relocation along the cluster edge by corner hops only ("method 1"):
// the lead corner particle swings ahead, the tile's type-2 follows over the
// top, and a trailing corner particle is brought along when the mover owns
// one. Peak exactly 3U on full steps. The lane from mover to target may run
// straight along one edge and turn cluster corners.
PathCertificate build_dimer_path_3U(const Configuration& start, const Cell& mover,
                                    const Cell& target, const Parameters& params);

// Tile relocation assisted by extra type-1 particles from the reservoir
// ("method 2"): pads pre-saturate each transit site so no state ever holds
// more than one broken bond, at the price of up to four simultaneous extra
// particles. Peak exactly U + 4 d1 when the lane turns a cluster corner
// (straight steps peak at U + 3 d1).
PathCertificate build_dimer_path_U4D1(const Configuration& start, const Cell& mover,
                                      const Cell& target, const Parameters& params);

// Slides an external two-tile bar one cell along its row, using one extra
// type-1. Peak exactly 2U + d1. `bar` is the cell of the bar tile farther
// from the travel direction; east = true slides toward +u.
PathCertificate build_bar_slide_2(const Configuration& start, const Cell& bar, bool east,
                                  const Parameters& params);

// Relocates the bar sitting on top of a rectangle onto the rectangle's east
// side: one extra type-1 opens a good dual corner at the bottom of the east
// face, each bar tile then travels there within 3U, and the helper leaves at
// the end. Peak exactly 3U + d1.
struct BarRelocationSpec {
  Cell rect_origin;  // lower-left cell of the rectangle
  int rect_w = 0;
  int rect_h = 0;
  int bar_u0 = 0;  // leftmost bar cell u-coordinate (bar sits on top row)
  int bar_len = 0;
};
PathCertificate build_bar_relocation(const Configuration& start, const BarRelocationSpec& spec,
                                     const Parameters& params);

}  // namespace kwl
