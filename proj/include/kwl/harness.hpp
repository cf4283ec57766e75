#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kwl/atlas.hpp"
#include "kwl/census.hpp"
#include "kwl/config.hpp"
#include "kwl/dynamics.hpp"

namespace kwl {

// 64-bit FNV-1a; manifests and result rows carry it so re-runs can be tied
// to their inputs.
std::uint64_t fnv1a(const std::string& data);
std::string digest_hex(const std::string& data);

// Least-squares slope/intercept of y against x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// One-sample Kolmogorov-Smirnov test of tau/mean(tau) against Exp(1).
struct KsReport {
  int n = 0;
  double statistic = 0.0;
  double p_value = 0.0;
  bool pass = false;  // at significance 0.01
};
KsReport ks_exponential(std::vector<double> samples, double significance = 0.01);

// True when the tile support contains a fully saturated side x side square.
bool contains_tiled_square(const Configuration& cfg, int side);

int harness_thread_count();  // KAWASAKI_LAB_THREADS caps hardware_concurrency

// ---------------------------------------------------------------------------
// Subcommand drivers. Each consumes a JSON manifest (see README for the
// schemas), computes, and returns machine-readable output. CSV schemas are
// versioned by their header line.
// ---------------------------------------------------------------------------

struct SimulateSpec {
  Parameters params;
  int L = 6;
  std::vector<double> betas;
  int replicas = 100;
  std::uint64_t seed = 1;
  bool full_target = false;      // stop at the checkerboard itself
  std::optional<int> stop_side;  // proxy square side; default max(2, l*)
  double max_time = 1e18;
  std::string digest;

  static SimulateSpec from_json(const std::string& text);
};

struct SimulateRow {
  double beta;
  int replica;
  std::uint64_t seed;
  bool hit;
  double tau;
};

struct SimulateResult {
  SimulateSpec spec;
  std::vector<SimulateRow> rows;
  std::vector<double> mean_tau;  // per beta
  std::vector<double> var_tau;

  std::string csv() const;  // versioned summary table
  std::string digest() const;
};

SimulateResult cmd_simulate(const SimulateSpec& spec);

struct ExpcheckResult {
  double beta = 0.0;
  KsReport ks;
  std::string json() const;
};
// KS on the tau samples of one beta (needs >= 100 samples).
ExpcheckResult cmd_expcheck(const SimulateResult& sim, double beta);

std::string cmd_count_csv(int l_min, int l_max);

struct GridSpec {
  // Inclusive decimal endpoints scanned with the given number of steps.
  std::string U = "1";
  std::string d1_lo, d1_hi;
  std::string d2_lo, d2_hi;
  int steps_d1 = 10;
  int steps_d2 = 10;
  static GridSpec from_json(const std::string& text);
};
std::string cmd_classify_csv(const GridSpec& grid);
std::string classify_point_json(const Parameters& p);

// Bounded exhaustive reproduction of the small-l* landscape: explores the
// modifying paths at a given l* = 2 parameter point and checks the
// minimal-energy set at n2 = 3 against the expected shape families.
struct SmallLandscapeResult {
  std::string status;  // proved / disproved / unknown
  bool g_equals_gbar = false;
  std::vector<std::string> reached_shapes;   // canonical cell lists
  std::vector<std::string> expected_shapes;
  std::string json() const;
};
SmallLandscapeResult cmd_landscape_small_lstar(const Parameters& params,
                                               std::size_t node_budget = 4000000);

struct PathcheckResult {
  struct Entry {
    std::string name;
    std::string barrier;
    std::string expected;
    bool exact = false;
  };
  std::vector<Entry> entries;
  bool all_exact = false;
  std::string json() const;
};
PathcheckResult cmd_pathcheck(const Parameters& params, int L = 16);

}  // namespace kwl
