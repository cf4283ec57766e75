#include "kwl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "kwl/landscape.hpp"
#include "kwl/paths.hpp"

namespace kwl {

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(const std::string& data) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(data)));
  return buf;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need >= 2 points");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

namespace {

// Asymptotic KS survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2k^2 l^2).
double ks_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

KsReport ks_exponential(std::vector<double> samples, double significance) {
  KsReport rep;
  rep.n = static_cast<int>(samples.size());
  if (rep.n < 100) throw std::invalid_argument("KS check needs >= 100 samples");
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= rep.n;
  if (!(mean > 0.0)) throw std::invalid_argument("KS check needs positive samples");
  for (double& s : samples) s /= mean;
  std::sort(samples.begin(), samples.end());
  double d = 0.0;
  for (int i = 0; i < rep.n; ++i) {
    double cdf = 1.0 - std::exp(-samples[i]);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / rep.n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / rep.n - cdf));
  }
  rep.statistic = d;
  double sn = std::sqrt(static_cast<double>(rep.n));
  rep.p_value = ks_q((sn + 0.12 + 0.11 / sn) * d);
  rep.pass = rep.p_value > significance;
  return rep;
}

bool contains_tiled_square(const Configuration& cfg, int side) {
  if (cfg.n2() < side * side) return false;
  auto cells = cfg.tile_support().cells();
  std::set<Cell> body(cells.begin(), cells.end());
  const Domain& dom = cfg.domain();
  auto saturated = [&](const Cell& c) {
    for (int par = 0; par < 2; ++par) {
      Site s = Site::from_doubled_dual(2 * c.u + par, 2 * c.v + par);
      int id = dom.id_of(s);
      if (id >= 0 && cfg.occ(id) == 2) return cfg.neighbor_count(id, 1) == 4;
    }
    return false;
  };
  for (const Cell& c : cells) {
    bool ok = true;
    for (int du = 0; du < side && ok; ++du)
      for (int dv = 0; dv < side && ok; ++dv) {
        Cell q{c.u + du, c.v + dv};
        ok = body.count(q) && saturated(q);
      }
    if (ok) return true;
  }
  return false;
}

int harness_thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("KAWASAKI_LAB_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(hw);
}

SimulateSpec SimulateSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SimulateSpec spec{Parameters::parse(j.at("U").get<std::string>(),
                                      j.at("d1").get<std::string>(),
                                      j.at("d2").get<std::string>())};
  spec.L = j.value("L", 6);
  if (j.at("beta").is_array())
    spec.betas = j.at("beta").get<std::vector<double>>();
  else
    spec.betas = {j.at("beta").get<double>()};
  spec.replicas = j.value("replicas", 100);
  spec.seed = j.value("seed", 1ULL);
  spec.full_target = j.value("full_target", false);
  if (j.contains("stop_side")) spec.stop_side = j.at("stop_side").get<int>();
  spec.max_time = j.value("max_time", 1e18);
  spec.digest = digest_hex(text);
  return spec;
}

SimulateResult cmd_simulate(const SimulateSpec& spec) {
  SimulateResult out{spec, {}, {}, {}};
  Domain dom(spec.L);
  Configuration empty = build_box(dom);

  int side = 2;
  if (spec.stop_side) {
    side = *spec.stop_side;
  } else {
    RegionReport rep = classify(spec.params);
    if (rep.l_star) side = std::max(2, *rep.l_star);
  }
  std::vector<Configuration> targets;
  if (spec.full_target) targets = build_boxplus(dom);

  std::function<bool(const Configuration&)> stop;
  if (spec.full_target) {
    stop = [&targets](const Configuration& c) {
      for (const Configuration& t : targets)
        if (c == t) return true;
      return false;
    };
  } else {
    stop = [side](const Configuration& c) { return contains_tiled_square(c, side); };
  }

  for (double beta : spec.betas) {
    Parameters p = spec.params;
    p.beta = beta;
    std::vector<SimulateRow> rows(spec.replicas);
    int nthreads = std::min(harness_thread_count(), spec.replicas);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    auto worker = [&]() {
      while (true) {
        int i = next.fetch_add(1);
        if (i >= spec.replicas) return;
        std::uint64_t s =
            CounterRng::derive(spec.seed, static_cast<std::uint64_t>(beta * 1000) * 100000 + i);
        Trajectory t = kmc_run(empty, p, stop, spec.max_time, s, false);
        rows[i] = {beta, i, s, t.hit, t.final_time};
      }
    };
    for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    double mean = 0.0;
    for (const auto& r : rows) mean += r.tau;
    mean /= spec.replicas;
    double var = 0.0;
    for (const auto& r : rows) var += (r.tau - mean) * (r.tau - mean);
    var /= std::max(1, spec.replicas - 1);
    out.mean_tau.push_back(mean);
    out.var_tau.push_back(var);
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  }
  return out;
}

std::string SimulateResult::csv() const {
  std::ostringstream os;
  os << "schema=simulate-v1,digest=" << spec.digest << "\n";
  os << "beta,replica,seed,hit,tau\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.beta << ',' << r.replica << ',' << r.seed << ',' << (r.hit ? 1 : 0) << ',' << r.tau
       << "\n";
  return os.str();
}

std::string SimulateResult::digest() const { return digest_hex(csv()); }

ExpcheckResult cmd_expcheck(const SimulateResult& sim, double beta) {
  std::vector<double> taus;
  for (const auto& r : sim.rows)
    if (r.beta == beta && r.hit) taus.push_back(r.tau);
  ExpcheckResult out;
  out.beta = beta;
  out.ks = ks_exponential(std::move(taus));
  return out;
}

std::string ExpcheckResult::json() const {
  nlohmann::json j;
  j["beta"] = beta;
  j["n"] = ks.n;
  j["ks_statistic"] = ks.statistic;
  j["p_value"] = ks.p_value;
  j["pass"] = ks.pass;
  return j.dump();
}

std::string cmd_count_csv(int l_min, int l_max) {
  std::ostringstream os;
  os << "schema=count-v1\n";
  os << "l_star,region,formula,enumerated,match\n";
  for (int l = l_min; l <= l_max; ++l) {
    struct Row {
      CountingRegion region;
      DropletClass cls;
      const char* name;
    };
    for (const Row& row : {Row{CountingRegion::RA, DropletClass::A, "RA"},
                           Row{CountingRegion::RB, DropletClass::B, "RB"},
                           Row{CountingRegion::RC, DropletClass::C, "RC"}}) {
      BigInt formula = n_star(row.region, l);
      BigInt enumerated = BigInt(enumerate_droplets(row.cls, l).size());
      os << l << ',' << row.name << ',' << formula << ',' << enumerated << ','
         << (formula == enumerated ? 1 : 0) << "\n";
    }
  }
  return os.str();
}

GridSpec GridSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GridSpec g;
  g.U = j.value("U", "1");
  g.d1_lo = j.at("d1_lo").get<std::string>();
  g.d1_hi = j.at("d1_hi").get<std::string>();
  g.d2_lo = j.at("d2_lo").get<std::string>();
  g.d2_hi = j.at("d2_hi").get<std::string>();
  g.steps_d1 = j.value("steps_d1", 10);
  g.steps_d2 = j.value("steps_d2", 10);
  return g;
}

std::string cmd_classify_csv(const GridSpec& grid) {
  std::ostringstream os;
  os << "schema=classify-v1\n";
  os << "U,d1,d2,region,epsilon,l_star,gamma_star,n_star\n";
  Energy U = Energy::parse(grid.U);
  Energy d1lo = Energy::parse(grid.d1_lo), d1hi = Energy::parse(grid.d1_hi);
  Energy d2lo = Energy::parse(grid.d2_lo), d2hi = Energy::parse(grid.d2_hi);
  for (int i = 0; i < grid.steps_d1; ++i) {
    Energy d1 = d1lo + (d1hi - d1lo) * Energy(i) / Energy(std::max(1, grid.steps_d1 - 1));
    for (int k = 0; k < grid.steps_d2; ++k) {
      Energy d2 = d2lo + (d2hi - d2lo) * Energy(k) / Energy(std::max(1, grid.steps_d2 - 1));
      if (d2 < d1 || d1.sign() <= 0 || d2.sign() <= 0) continue;
      Parameters p(U, d1, d2);
      RegionReport rep = classify(p);
      os << U.str() << ',' << d1.str() << ',' << d2.str() << ',' << region_name(rep.region)
         << ',';
      os << (rep.epsilon ? rep.epsilon->str() : "") << ',';
      os << (rep.l_star ? std::to_string(*rep.l_star) : "") << ',';
      os << (rep.gamma_star ? rep.gamma_star->str() : "") << ',';
      std::string ns;
      if (rep.region == Region::Trivial) {
        ns = "1";
      } else if (rep.l_star && *rep.l_star >= 4) {
        if (rep.region == Region::RA) ns = n_star(CountingRegion::RA, *rep.l_star).str();
        if (rep.region == Region::RB) ns = n_star(CountingRegion::RB, *rep.l_star).str();
        if (rep.region == Region::RC) ns = n_star(CountingRegion::RC, *rep.l_star).str();
      }
      os << ns << "\n";
    }
  }
  return os.str();
}

std::string classify_point_json(const Parameters& p) { return classify(p).to_json(); }

SmallLandscapeResult cmd_landscape_small_lstar(const Parameters& params,
                                               std::size_t node_budget) {
  SmallLandscapeResult out;
  RegionReport rep = classify(params);
  if (!rep.l_star || *rep.l_star != 2 || !rep.gamma_star)
    throw std::invalid_argument("landscape probe expects an l* = 2 parameter point");
  Energy gamma = *rep.gamma_star;

  // Expected minimal set at n2 = 3: the 2x2 square minus a corner, or the
  // 1x3 / 3x1 bar, modulo translation.
  std::set<std::string> expected;
  for (const DualPolyomino& p3 : {DualPolyomino({{0, 0}, {1, 0}, {0, 1}}),
                                  DualPolyomino({{0, 0}, {1, 0}, {1, 1}}),
                                  DualPolyomino({{0, 1}, {1, 0}, {1, 1}}),
                                  DualPolyomino({{0, 0}, {0, 1}, {1, 1}}),
                                  DualPolyomino({{0, 0}, {1, 0}, {2, 0}}),
                                  DualPolyomino({{0, 0}, {0, 1}, {0, 2}})}) {
    expected.insert(p3.normalized().to_json());
  }
  out.expected_shapes.assign(expected.begin(), expected.end());

  // Modifying-path exploration from the standard shape at n2 = 3: the
  // droplet keeps its three type-2 particles while type-1 particles move,
  // enter and leave.
  ReducedState start = reduced_from_polyomino(standard_polyomino(3));
  ReducedConstraints rc;
  rc.min_n2 = 3;
  rc.max_n2 = 3;
  rc.max_extent = 7;
  rc.node_budget = node_budget;

  Energy h0 = reduced_energy(start, params);
  ReducedGraph rg = explore_reduced(start, params, gamma, rc);
  if (rg.truncated) {
    out.status = "unknown";
    return out;
  }

  // Reachability through states strictly below gamma, and at or below it.
  auto reach_shapes = [&](bool strict_below) {
    std::set<std::string> shapes;
    std::vector<bool> seen(rg.graph.size(), false);
    std::vector<int> queue;
    auto ok = [&](int v) {
      return strict_below ? rg.graph.h[v] < gamma : rg.graph.h[v] <= gamma;
    };
    int s0 = rg.find(start);
    if (s0 < 0 || !ok(s0)) return shapes;
    seen[s0] = true;
    queue.push_back(s0);
    while (!queue.empty()) {
      int v = queue.back();
      queue.pop_back();
      const ReducedState& st = rg.states[v];
      if (rg.graph.h[v] == h0 && reduced_is_tiled(st))
        shapes.insert(reduced_tile_support(st).normalized().to_json());
      for (int w : rg.graph.adj[v]) {
        if (!seen[w] && ok(w)) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    return shapes;
  };

  std::set<std::string> reached = reach_shapes(true);
  std::set<std::string> reached_loose = reach_shapes(false);
  out.reached_shapes.assign(reached.begin(), reached.end());
  out.g_equals_gbar = reached == reached_loose;
  out.status = (reached == expected && out.g_equals_gbar) ? "proved" : "disproved";
  return out;
}

std::string SmallLandscapeResult::json() const {
  nlohmann::json j;
  j["status"] = status;
  j["g_equals_gbar"] = g_equals_gbar;
  j["reached"] = reached_shapes;
  j["expected"] = expected_shapes;
  return j.dump();
}

PathcheckResult cmd_pathcheck(const Parameters& params, int L) {
  PathcheckResult out;
  Domain dom(L);
  Site anchor = core_anchor(dom, 8, 8);
  const Cell a0 = cell_of(anchor);
  const Energy U = params.U, d1 = params.d1;

  auto record = [&](const std::string& name, const PathCertificate& cert,
                    const Energy& expected) {
    out.entries.push_back({name, cert.barrier.str(), expected.str(),
                           cert.barrier == expected});
  };
  auto shift = [&](Cell c) { return Cell{c.u + a0.u, c.v + a0.v}; };

  // corner-hop relocation around the rectangle corner (4x3 plus a mover on
  // the top side's east end, onto the east face)
  {
    std::vector<Cell> cells = DualPolyomino::rectangle(4, 3).cells();
    cells.push_back({3, 3});
    Configuration start = embed_polyomino(DualPolyomino(cells), anchor, dom);
    PathCertificate cert = build_dimer_path_3U(start, shift({3, 3}), shift({4, 2}), params);
    record("dimer_corner_hops", cert, U * Energy(3));
  }
  // reservoir-assisted slide along the top side
  {
    std::vector<Cell> cells = DualPolyomino::rectangle(4, 3).cells();
    cells.push_back({0, 3});
    Configuration start = embed_polyomino(DualPolyomino(cells), anchor, dom);
    PathCertificate cert = build_dimer_path_U4D1(start, shift({0, 3}), shift({2, 3}), params);
    record("dimer_reservoir_assisted", cert, U + d1 * Energy(4));
  }
  // two-tile bar slide
  {
    std::vector<Cell> cells = DualPolyomino::rectangle(4, 3).cells();
    cells.push_back({0, 3});
    cells.push_back({1, 3});
    Configuration start = embed_polyomino(DualPolyomino(cells), anchor, dom);
    PathCertificate cert = build_bar_slide_2(start, shift({0, 3}), true, params);
    record("bar_slide_2", cert, U * Energy(2) + d1);
  }
  // bar relocation onto the east side
  {
    std::vector<Cell> cells = DualPolyomino::rectangle(4, 3).cells();
    cells.push_back({0, 3});
    cells.push_back({1, 3});
    Configuration start = embed_polyomino(DualPolyomino(cells), anchor, dom);
    BarRelocationSpec spec;
    spec.rect_origin = shift({0, 0});
    spec.rect_w = 4;
    spec.rect_h = 3;
    spec.bar_u0 = a0.u;
    spec.bar_len = 2;
    PathCertificate cert = build_bar_relocation(start, spec, params);
    record("bar_relocation", cert, U * Energy(3) + d1);
  }
  out.all_exact = true;
  for (const auto& e : out.entries) out.all_exact = out.all_exact && e.exact;
  return out;
}

std::string PathcheckResult::json() const {
  nlohmann::json j;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries)
    arr.push_back({{"name", e.name},
                   {"barrier", e.barrier},
                   {"expected", e.expected},
                   {"exact", e.exact}});
  j["certificates"] = arr;
  j["all_exact"] = all_exact;
  return j.dump();
}

}  // namespace kwl
