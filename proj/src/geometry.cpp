#include "kwl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace kwl {

Parity particle_parity(const Site& s, int occupancy) {
  if (occupancy != 1 && occupancy != 2) throw std::invalid_argument("no particle at site");
  return ((s.x1 + s.x2 + occupancy) % 2 + 2) % 2 == 1 ? Parity::Odd : Parity::Even;
}

Tile tile(const Site& center) {
  Tile t;
  t.e = center;
  t.a = Site{center.x1, center.x2 + 1};
  t.b = Site{center.x1 + 1, center.x2};
  t.c = Site{center.x1, center.x2 - 1};
  t.d = Site{center.x1 - 1, center.x2};
  return t;
}

// ---------------------------------------------------------------------------
// DualPolyomino
// ---------------------------------------------------------------------------

DualPolyomino::DualPolyomino(std::vector<Cell> cells) : cells_(std::move(cells)) {
  std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
}

DualPolyomino DualPolyomino::rectangle(int w, int h, Cell origin) {
  std::vector<Cell> cs;
  cs.reserve(static_cast<size_t>(w) * h);
  for (int u = 0; u < w; ++u)
    for (int v = 0; v < h; ++v) cs.push_back({origin.u + u, origin.v + v});
  return DualPolyomino(std::move(cs));
}

bool DualPolyomino::contains(const Cell& c) const {
  return std::binary_search(cells_.begin(), cells_.end(), c);
}

int DualPolyomino::perimeter() const {
  int adj = 0;
  for (const Cell& c : cells_) {
    if (contains({c.u + 1, c.v})) ++adj;
    if (contains({c.u, c.v + 1})) ++adj;
  }
  return 4 * area() - 2 * adj;
}

CornerCensus DualPolyomino::corner_census() const {
  CornerCensus out;
  // Vertices of the cell grid; vertex (i,j) touches cells (i-1..i, j-1..j).
  std::set<std::pair<int, int>> vertices;
  for (const Cell& c : cells_) {
    vertices.insert({c.u, c.v});
    vertices.insert({c.u + 1, c.v});
    vertices.insert({c.u, c.v + 1});
    vertices.insert({c.u + 1, c.v + 1});
  }
  for (auto [i, j] : vertices) {
    bool sw = contains({i - 1, j - 1});
    bool se = contains({i, j - 1});
    bool nw = contains({i - 1, j});
    bool ne = contains({i, j});
    int n = int(sw) + int(se) + int(nw) + int(ne);
    if (n == 1) {
      ++out.convex;
    } else if (n == 3) {
      ++out.concave;
    } else if (n == 2 && ((sw && ne) || (se && nw))) {
      out.concave += 2;
    }
  }
  // Tiles touching at a vertex share the type-1 particle there, so C counts
  // vertex-connected components; holes are 4-connected empty regions.
  out.clusters = cluster_count(true);
  out.holes = hole_count();
  return out;
}

int DualPolyomino::cluster_count(bool vertex_connectivity) const {
  if (cells_.empty()) return 0;
  static constexpr std::array<std::pair<int, int>, 8> kAll = {
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  int span = vertex_connectivity ? 8 : 4;
  std::map<Cell, int> comp;
  int n = 0;
  for (const Cell& c : cells_) {
    if (comp.count(c)) continue;
    ++n;
    std::queue<Cell> q;
    q.push(c);
    comp[c] = n;
    while (!q.empty()) {
      Cell x = q.front();
      q.pop();
      for (int d = 0; d < span; ++d) {
        Cell y{x.u + kAll[d].first, x.v + kAll[d].second};
        if (contains(y) && !comp.count(y)) {
          comp[y] = n;
          q.push(y);
        }
      }
    }
  }
  return n;
}

int DualPolyomino::hole_count() const {
  if (cells_.empty()) return 0;
  auto [w, h] = circumscribing_rectangle();
  int u0 = cells_.front().u, v0 = cells_.front().v;
  for (const Cell& c : cells_) {
    u0 = std::min(u0, c.u);
    v0 = std::min(v0, c.v);
  }
  // Flood the complement over the bounding box padded by one ring; every
  // complement component not reaching the ring is a hole.
  int W = w + 2, H = h + 2;
  std::vector<int> mark(static_cast<size_t>(W) * H, 0);  // 0 empty, 1 cell, 2 outside-flood
  auto at = [&](int u, int v) -> int& { return mark[static_cast<size_t>(u) * H + v]; };
  for (const Cell& c : cells_) at(c.u - u0 + 1, c.v - v0 + 1) = 1;
  std::queue<std::pair<int, int>> q;
  q.push({0, 0});
  at(0, 0) = 2;
  while (!q.empty()) {
    auto [u, v] = q.front();
    q.pop();
    for (auto [du, dv] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      int nu = u + du, nv = v + dv;
      if (nu < 0 || nv < 0 || nu >= W || nv >= H) continue;
      if (at(nu, nv) == 0) {
        at(nu, nv) = 2;
        q.push({nu, nv});
      }
    }
  }
  int holes = 0;
  for (int u = 0; u < W; ++u) {
    for (int v = 0; v < H; ++v) {
      if (at(u, v) != 0) continue;
      ++holes;
      std::queue<std::pair<int, int>> hq;
      hq.push({u, v});
      at(u, v) = 2;
      while (!hq.empty()) {
        auto [a, b] = hq.front();
        hq.pop();
        for (auto [du, dv] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          int na = a + du, nb = b + dv;
          if (na < 0 || nb < 0 || na >= W || nb >= H) continue;
          if (at(na, nb) == 0) {
            at(na, nb) = 2;
            hq.push({na, nb});
          }
        }
      }
    }
  }
  return holes;
}

bool DualPolyomino::connected() const { return cluster_count() <= 1; }

std::pair<int, int> DualPolyomino::circumscribing_rectangle() const {
  if (cells_.empty()) throw std::domain_error("empty polyomino");
  int umin = cells_[0].u, umax = cells_[0].u, vmin = cells_[0].v, vmax = cells_[0].v;
  for (const Cell& c : cells_) {
    umin = std::min(umin, c.u);
    umax = std::max(umax, c.u);
    vmin = std::min(vmin, c.v);
    vmax = std::max(vmax, c.v);
  }
  return {umax - umin + 1, vmax - vmin + 1};
}

bool DualPolyomino::is_monotone() const {
  auto [w, h] = circumscribing_rectangle();
  return perimeter() == 2 * (w + h);
}

bool DualPolyomino::is_standard() const {
  if (cells_.empty()) throw std::domain_error("empty polyomino");
  if (!connected() || hole_count() > 0) return false;
  DualPolyomino p = normalized();
  auto [w, h] = p.circumscribing_rectangle();
  if (p.area() == w * h) return std::abs(w - h) <= 1;

  // Otherwise the shape must be a full quasi-square plus a contiguous bar
  // occupying part of one outermost row or column along a longest side.
  auto check = [&](bool bar_is_row, int bar_index, int rw, int rh) {
    if (std::abs(rw - rh) > 1) return false;
    if (std::max(rw, rh) != (bar_is_row ? rw : rh)) return false;  // longest side only
    std::vector<int> bar;
    for (const Cell& c : p.cells()) {
      bool in_bar = bar_is_row ? c.v == bar_index : c.u == bar_index;
      if (in_bar) {
        bar.push_back(bar_is_row ? c.u : c.v);
      } else {
        int uu = bar_is_row ? c.u : c.u - (bar_index == 0 ? 1 : 0);
        int vv = bar_is_row ? c.v - (bar_index == 0 ? 1 : 0) : c.v;
        if (uu < 0 || uu >= rw || vv < 0 || vv >= rh) return false;
      }
    }
    if (bar.empty() || static_cast<int>(bar.size()) == (bar_is_row ? rw : rh)) return false;
    if (p.area() != rw * rh + static_cast<int>(bar.size())) return false;
    std::sort(bar.begin(), bar.end());
    for (size_t i = 1; i < bar.size(); ++i)
      if (bar[i] != bar[i - 1] + 1) return false;
    return true;
  };

  // Bar on top row, bottom row, right column, left column.
  if (check(true, h - 1, w, h - 1)) return true;
  if (check(true, 0, w, h - 1)) return true;
  if (check(false, w - 1, w - 1, h)) return true;
  if (check(false, 0, w - 1, h)) return true;
  return false;
}

DualPolyomino DualPolyomino::translated(int du, int dv) const {
  std::vector<Cell> cs = cells_;
  for (Cell& c : cs) {
    c.u += du;
    c.v += dv;
  }
  return DualPolyomino(std::move(cs));
}

DualPolyomino DualPolyomino::normalized() const {
  if (cells_.empty()) return *this;
  int umin = cells_[0].u, vmin = cells_[0].v;
  for (const Cell& c : cells_) {
    umin = std::min(umin, c.u);
    vmin = std::min(vmin, c.v);
  }
  return translated(-umin, -vmin);
}

std::vector<DualPolyomino> DualPolyomino::symmetry_images() const {
  std::vector<DualPolyomino> out;
  out.reserve(8);
  for (int t = 0; t < 8; ++t) {
    std::vector<Cell> cs;
    cs.reserve(cells_.size());
    for (const Cell& c : cells_) {
      int u = c.u, v = c.v;
      int a = 0, b = 0;
      switch (t) {
        case 0: a = u, b = v; break;
        case 1: a = -v, b = u; break;
        case 2: a = -u, b = -v; break;
        case 3: a = v, b = -u; break;
        case 4: a = -u, b = v; break;
        case 5: a = v, b = u; break;
        case 6: a = u, b = -v; break;
        case 7: a = -v, b = -u; break;
      }
      cs.push_back({a, b});
    }
    out.push_back(DualPolyomino(std::move(cs)).normalized());
  }
  return out;
}

DualPolyomino DualPolyomino::canonical_free() const {
  auto imgs = symmetry_images();
  return *std::min_element(imgs.begin(), imgs.end());
}

DualPolyomino DualPolyomino::canonical_one_sided() const {
  auto imgs = symmetry_images();
  return *std::min_element(imgs.begin(), imgs.begin() + 4);
}

int DualPolyomino::symmetry_order() const {
  DualPolyomino self = normalized();
  int n = 0;
  for (const auto& img : symmetry_images())
    if (img == self) ++n;
  return n;
}

std::string DualPolyomino::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Cell& c : cells_) arr.push_back({c.u, c.v});
  return arr.dump();
}

DualPolyomino DualPolyomino::from_json(const std::string& text) {
  nlohmann::json arr = nlohmann::json::parse(text);
  std::vector<Cell> cs;
  for (const auto& e : arr) cs.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  return DualPolyomino(std::move(cs));
}

DualPolyomino standard_polyomino(int n) {
  if (n < 1) throw std::invalid_argument("standard polyomino needs n >= 1");
  int k = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while ((k + 1) * (k + 1) <= n) ++k;
  while (k * k > n) --k;
  std::vector<Cell> cs;
  int base_w, base_h;
  if (n <= k * (k + 1)) {
    base_w = k;
    base_h = k;
  } else {
    base_w = k + 1;
    base_h = k;
  }
  for (int u = 0; u < base_w; ++u)
    for (int v = 0; v < base_h; ++v) cs.push_back({u, v});
  int rest = n - base_w * base_h;
  for (int u = 0; u < rest; ++u) cs.push_back({u, base_h});  // bar on a longest side
  return DualPolyomino(std::move(cs));
}

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

Domain::Domain(int L) : L_(L) {
  if (L < 2) throw std::invalid_argument("domain needs L >= 2");
  dumin_ = -(L + 1);
  dumax_ = L + 2;
  int range = dumax_ - dumin_ + 1;
  grid_.assign(static_cast<size_t>(range) * range, -1);

  for (int A = dumin_; A <= dumax_; ++A) {
    for (int B = dumin_; B <= dumax_; ++B) {
      if (((A - B) & 1) != 0) continue;
      grid_[grid_index(A, B)] = static_cast<int>(sites_.size());
      sites_.push_back(Site::from_doubled_dual(A, B));
    }
  }

  int n = size();
  neighbors_.resize(n);
  inner_boundary_.assign(n, false);
  core2_.assign(n, false);
  far3_.assign(n, false);
  reservoir_bonds_.assign(n, 0);
  dist2_boundary_.assign(n, 0);
  latdist_boundary_.assign(n, 0);

  for (int i = 0; i < n; ++i) {
    const Site s = sites_[i];
    int outside = 0;
    for (int d = 0; d < 4; ++d) {
      Site t{s.x1 + kNeighborOffsets[d].first, s.x2 + kNeighborOffsets[d].second};
      int j = id_of(t);
      neighbors_[i][d] = j;
      if (j < 0) ++outside;
    }
    if (outside > 0) {
      inner_boundary_[i] = true;
      reservoir_bonds_[i] = outside;
      inner_boundary_ids_.push_back(i);
    }
  }

  for (int i = 0; i < n; ++i) {
    int best2 = INT32_MAX, best1 = INT32_MAX;
    const Site s = sites_[i];
    for (int b : inner_boundary_ids_) {
      const Site t = sites_[b];
      int dx = s.x1 - t.x1, dy = s.x2 - t.x2;
      best2 = std::min(best2, dx * dx + dy * dy);
      best1 = std::min(best1, std::abs(dx) + std::abs(dy));
    }
    dist2_boundary_[i] = best2;
    latdist_boundary_[i] = best1;
    far3_[i] = best2 > 4;
  }

  for (int i = 0; i < n; ++i) {
    if (inner_boundary_[i]) continue;
    bool core2 = true;
    for (int d = 0; d < 4; ++d) {
      int j = neighbors_[i][d];
      if (j < 0 || inner_boundary_[j]) core2 = false;
    }
    core2_[i] = core2;
  }
}

int Domain::grid_index(int A, int B) const {
  int range = dumax_ - dumin_ + 1;
  return (A - dumin_) * range + (B - dumin_);
}

int Domain::id_of(const Site& s) const {
  int A = s.du1(), B = s.du2();
  if (A < dumin_ || A > dumax_ || B < dumin_ || B > dumax_) return -1;
  return grid_[grid_index(A, B)];
}

bool Domain::tile_fits_interacting(const Site& center, int extra_margin) const {
  for (const Site& s : tile(center).all()) {
    int id = id_of(s);
    if (id < 0) return false;
    if (latdist_boundary_[id] < 3 + extra_margin) return false;
  }
  return true;
}

}  // namespace kwl
