#include "kwl/config.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kwl {

Parameters::Parameters(Energy u, Energy delta1, Energy delta2, double beta_)
    : U(u), d1(delta1), d2(delta2), beta(beta_) {
  if (!(U.sign() > 0)) throw std::invalid_argument("U must be positive");
  if (!(d1.sign() > 0) || !(d2.sign() > 0))
    throw std::invalid_argument("activation energies must be positive");
  if (d2 < d1) throw std::invalid_argument("requires d1 <= d2");
  if (beta < 0) throw std::invalid_argument("beta must be >= 0");
}

Parameters Parameters::parse(const std::string& u, const std::string& delta1,
                             const std::string& delta2, double beta) {
  return Parameters(Energy::parse(u), Energy::parse(delta1), Energy::parse(delta2), beta);
}

Configuration::Configuration(const Domain& dom) : dom_(&dom), occ_(dom.size(), 0) {}

int Configuration::occ_at(const Site& s) const {
  int id = dom_->id_of(s);
  if (id < 0) throw std::out_of_range("site outside the domain");
  return occ_[id];
}

int Configuration::bonds_at(int site_id) const {
  int t = occ_[site_id];
  if (t == 0) return 0;
  int n = 0;
  for (int d = 0; d < 4; ++d) {
    int j = dom_->neighbor(site_id, d);
    if (j >= 0 && dom_->interacting_bond(site_id, d) && occ_[j] * t == 2) ++n;
  }
  return n;
}

int Configuration::neighbor_count(int site_id, int value) const {
  int n = 0;
  for (int d = 0; d < 4; ++d) {
    int j = dom_->neighbor(site_id, d);
    if (j >= 0 && occ_[j] == value) ++n;
  }
  return n;
}

void Configuration::set(int site_id, int value) {
  int old = occ_[site_id];
  if (old == value) return;
  bonds_ -= bonds_at(site_id);
  if (old == 1) --n1_;
  if (old == 2) --n2_;
  occ_[site_id] = static_cast<std::uint8_t>(value);
  if (value == 1) ++n1_;
  if (value == 2) ++n2_;
  bonds_ += bonds_at(site_id);
}

void Configuration::set_at(const Site& s, int value) {
  int id = dom_->id_of(s);
  if (id < 0) throw std::out_of_range("site outside the domain");
  set(id, value);
}

Energy Configuration::energy(const Parameters& p) const {
  return p.d1 * Energy(n1_) + p.d2 * Energy(n2_) - p.U * Energy(bonds_);
}

double Configuration::energy_d(const Parameters& p) const {
  return p.d1_d() * n1_ + p.d2_d() * n2_ - p.u_d() * bonds_;
}

double Configuration::gibbs_weight(const Parameters& p) const {
  return std::exp(-p.beta * energy_d(p));
}

void Configuration::recount() {
  n1_ = n2_ = bonds_ = 0;
  for (size_t i = 0; i < occ_.size(); ++i) {
    if (occ_[i] == 1) ++n1_;
    if (occ_[i] == 2) ++n2_;
  }
  int twice = 0;
  for (int i = 0; i < dom_->size(); ++i) twice += bonds_at(i);
  bonds_ = twice / 2;
}

bool Configuration::counts_consistent() const {
  Configuration copy = *this;
  copy.recount();
  return copy.n1_ == n1_ && copy.n2_ == n2_ && copy.bonds_ == bonds_;
}

bool Configuration::is_tiled() const {
  if (bonds_ != 4 * n2_) return false;
  for (int i = 0; i < dom_->size(); ++i) {
    if (occ_[i] == 1 && bonds_at(i) == 0) return false;
  }
  return true;
}

DualPolyomino Configuration::tile_support() const {
  std::vector<Cell> cells;
  for (int i = 0; i < dom_->size(); ++i) {
    if (occ_[i] == 2) cells.push_back(cell_of(dom_->site(i)));
  }
  return DualPolyomino(std::move(cells));
}

int Configuration::t_statistic() const {
  if (!is_tiled()) throw std::domain_error("T defined on tiled configurations");
  DualPolyomino supp = tile_support();
  CornerCensus cc = supp.corner_census();
  return 2 * supp.perimeter() + (cc.convex - cc.concave);
}

Parity Configuration::parity_at(int site_id) const {
  return particle_parity(dom_->site(site_id), occ_[site_id]);
}

std::vector<int> Configuration::good_dual_corners() const {
  std::vector<int> out;
  for (int i = 0; i < dom_->size(); ++i) {
    if (occ_[i] != 0) continue;
    if (neighbor_count(i, 1) == 3) out.push_back(i);
  }
  return out;
}

std::vector<bool> Configuration::lattice_connecting_all() const {
  std::vector<bool> reached(dom_->size(), false);
  std::queue<int> q;
  for (int b : dom_->inner_boundary_ids()) {
    if (occ_[b] == 0) {
      reached[b] = true;
      q.push(b);
    }
  }
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int d = 0; d < 4; ++d) {
      int j = dom_->neighbor(x, d);
      if (j >= 0 && !reached[j] && occ_[j] == 0) {
        reached[j] = true;
        q.push(j);
      }
    }
  }
  std::vector<bool> out(dom_->size(), false);
  for (int i = 0; i < dom_->size(); ++i) {
    if (dom_->inner_boundary(i)) {
      out[i] = true;  // zero-length path
      continue;
    }
    for (int d = 0; d < 4 && !out[i]; ++d) {
      int j = dom_->neighbor(i, d);
      if (j >= 0 && reached[j]) out[i] = true;
    }
  }
  return out;
}

bool Configuration::lattice_connecting(int site_id) const {
  if (site_id < 0 || site_id >= dom_->size()) throw std::out_of_range("site outside the domain");
  return lattice_connecting_all()[site_id];
}

void Configuration::saturate(int site_id) {
  if (occ_[site_id] != 2) throw std::invalid_argument("saturate needs a type-2 site");
  for (int d = 0; d < 4; ++d) {
    int j = dom_->neighbor(site_id, d);
    if (j < 0) throw std::invalid_argument("cannot saturate: tile leaves the domain");
    if (occ_[j] == 2) throw std::invalid_argument("cannot saturate: neighboring type-2");
  }
  for (int d = 0; d < 4; ++d) {
    int j = dom_->neighbor(site_id, d);
    if (occ_[j] == 0) set(j, 1);
  }
}

MinimalReference minimal_reference(int n2) {
  if (n2 < 0) throw std::invalid_argument("no minimal reference for negative n2");
  if (n2 == 0) return {0, 0};
  DualPolyomino shape = standard_polyomino(n2);
  CornerCensus cc = shape.corner_census();
  int t = 2 * shape.perimeter() + (cc.convex - cc.concave);
  return {4 * n2, n2 + t / 4};
}

int Configuration::broken_bonds() const { return minimal_reference(n2_).b_min - bonds_; }

int Configuration::extra_type1() const { return n1_ - minimal_reference(n2_).n1_min; }

std::string Configuration::to_json() const {
  std::string rle;
  int i = 0;
  int n = dom_->size();
  while (i < n) {
    int j = i;
    while (j < n && occ_[j] == occ_[i]) ++j;
    if (!rle.empty()) rle += ',';
    rle += std::to_string(int(occ_[i])) + ":" + std::to_string(j - i);
    i = j;
  }
  nlohmann::json obj;
  obj["L"] = dom_->L();
  obj["occupancy"] = rle;
  return obj.dump();
}

Configuration Configuration::from_json(const std::string& text, const Domain& dom) {
  nlohmann::json obj = nlohmann::json::parse(text);
  if (obj.at("L").get<int>() != dom.L()) throw std::invalid_argument("domain size mismatch");
  Configuration cfg(dom);
  std::string rle = obj.at("occupancy").get<std::string>();
  int pos = 0;
  size_t k = 0;
  while (k < rle.size()) {
    size_t colon = rle.find(':', k);
    size_t comma = rle.find(',', colon);
    if (comma == std::string::npos) comma = rle.size();
    int digit = std::stoi(rle.substr(k, colon - k));
    int count = std::stoi(rle.substr(colon + 1, comma - colon - 1));
    for (int i = 0; i < count; ++i, ++pos) {
      if (digit != 0) cfg.set(pos, digit);
    }
    k = comma + 1;
  }
  if (pos != dom.size()) throw std::invalid_argument("occupancy length mismatch");
  return cfg;
}

std::string Configuration::occupancy_key() const {
  return std::string(reinterpret_cast<const char*>(occ_.data()), occ_.size());
}

}  // namespace kwl
