#include "kwl/census.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace kwl {

// ---------------------------------------------------------------------------
// PowerSeries
// ---------------------------------------------------------------------------

PowerSeries::PowerSeries(int order, BigInt constant) : coeff_(order + 1, 0) {
  if (order < 0) throw std::invalid_argument("series order must be >= 0");
  coeff_[0] = std::move(constant);
}

PowerSeries PowerSeries::monomial(int order, int exponent, BigInt coeff) {
  PowerSeries p(order);
  if (exponent <= order) p.coeff_[exponent] = std::move(coeff);
  return p;
}

const BigInt& PowerSeries::operator[](int k) const {
  if (k < 0 || k > order()) throw std::out_of_range("coefficient beyond truncation order");
  return coeff_[k];
}

PowerSeries PowerSeries::operator+(const PowerSeries& o) const {
  if (o.order() != order()) throw std::invalid_argument("order mismatch");
  PowerSeries out = *this;
  for (int k = 0; k <= order(); ++k) out.coeff_[k] += o.coeff_[k];
  return out;
}

PowerSeries PowerSeries::operator-(const PowerSeries& o) const {
  if (o.order() != order()) throw std::invalid_argument("order mismatch");
  PowerSeries out = *this;
  for (int k = 0; k <= order(); ++k) out.coeff_[k] -= o.coeff_[k];
  return out;
}

PowerSeries PowerSeries::operator*(const PowerSeries& o) const {
  if (o.order() != order()) throw std::invalid_argument("order mismatch");
  PowerSeries out(order());
  out.coeff_[0] = 0;
  for (int i = 0; i <= order(); ++i) {
    if (coeff_[i] == 0) continue;
    for (int j = 0; i + j <= order(); ++j) {
      if (o.coeff_[j] == 0) continue;
      out.coeff_[i + j] += coeff_[i] * o.coeff_[j];
    }
  }
  return out;
}

PowerSeries PowerSeries::scaled(const BigInt& f) const {
  PowerSeries out = *this;
  for (auto& c : out.coeff_) c *= f;
  return out;
}

PowerSeries PowerSeries::compose_xpow(int m) const {
  if (m < 1) throw std::invalid_argument("substitution exponent must be >= 1");
  PowerSeries out(order());
  out.coeff_[0] = 0;
  for (int k = 0; k <= order(); ++k) {
    if (coeff_[k] == 0) continue;
    if (static_cast<long long>(k) * m > order()) break;
    out.coeff_[k * m] = coeff_[k];
  }
  return out;
}

PowerSeries PowerSeries::reciprocal() const {
  if (coeff_[0] != 1) throw std::domain_error("reciprocal needs constant term 1");
  PowerSeries out(order());
  out.coeff_[0] = 1;
  for (int k = 1; k <= order(); ++k) {
    BigInt acc = 0;
    for (int j = 1; j <= k; ++j) acc += coeff_[j] * out.coeff_[k - j];
    out.coeff_[k] = -acc;
  }
  return out;
}

PowerSeries PowerSeries::divide_exact(int divisor) const {
  PowerSeries out = *this;
  for (int k = 0; k <= order(); ++k) {
    if (out.coeff_[k] % divisor != 0)
      throw std::logic_error("non-integer coefficient after division");
    out.coeff_[k] /= divisor;
  }
  return out;
}

PowerSeries series_a(int order) {
  PowerSeries a(order, 1);
  for (int j = 1; j <= order; ++j) {
    for (int i = j; i <= order; ++i) a.at(i) += a[i - j];
  }
  return a;
}

PowerSeries series_s(int order) {
  PowerSeries s(order, 1);
  for (int k = 1; static_cast<long long>(k) * k <= order; ++k) {
    PowerSeries term = PowerSeries::monomial(order, k * k);
    for (int j = 1; j <= k; ++j) {
      for (int i = 2 * j; i <= order; ++i) term.at(i) += term[i - 2 * j];
    }
    s = s + term;
  }
  return s;
}

PowerSeries series_r(int order) {
  PowerSeries a = series_a(order);
  PowerSeries a2 = a * a;
  PowerSeries a4 = a2 * a2;
  PowerSeries ax2 = a.compose_xpow(2);
  return (a4 + (ax2 * ax2).scaled(3)).divide_exact(4);
}

PowerSeries series_q(int order) {
  PowerSeries a = series_a(order);
  PowerSeries s = series_s(order);
  PowerSeries a2 = a * a;
  PowerSeries a4 = a2 * a2;
  PowerSeries ax2 = a.compose_xpow(2);
  PowerSeries ax4 = a.compose_xpow(4);
  PowerSeries sum = a4 + (ax2 * ax2).scaled(3) + (s * s * ax2).scaled(2) + ax4.scaled(2);
  return sum.divide_exact(8);
}

std::int64_t isqrt64(std::int64_t n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

BigInt e_count(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("e(n) needs n >= 1");
  std::int64_t s = isqrt64(n);
  int order = static_cast<int>(s + 2);
  PowerSeries r = series_r(order);
  PowerSeries q = series_q(order);

  if (n == s * s) return 1;
  std::int64_t t = n - s * s;
  if (t < s) {
    // n = s^2 + t with 0 < t < s
    BigInt acc = 0;
    std::int64_t cmax = (isqrt64(1 + 4 * s - 4 * t) - 1) / 2;
    for (std::int64_t c = 0; c <= cmax; ++c) acc += r[static_cast<int>(s - c - c * c - t)];
    return acc;
  }
  t = n - s * s - s;
  if (t == 0) return 1;  // n = s^2 + s; read as the t = 0 case
  // n = s^2 + s + t with 0 < t <= s
  BigInt acc = q[static_cast<int>(s + 1 - t)];
  std::int64_t cmax = isqrt64(s + 1 - t);
  for (std::int64_t c = 1; c <= cmax; ++c) acc += r[static_cast<int>(s + 1 - c * c - t)];
  return acc;
}

int min_perimeter(int n) {
  // 2 * ceil(2 sqrt(n)); cross-checked against enumeration in the tests.
  std::int64_t f = 4 * static_cast<std::int64_t>(n);
  std::int64_t root = isqrt64(f);
  std::int64_t c = root * root == f ? root : root + 1;
  return static_cast<int>(2 * c);
}

// ---------------------------------------------------------------------------
// Fixed-polyomino enumeration (Redelmeier's frontier scheme): the first cell
// is the lowest-leftmost, later cells come from an untried frontier list, and
// cells popped at one level stay blocked in the subtree so each translation
// class appears exactly once.
// ---------------------------------------------------------------------------

namespace {

constexpr int kEnumBudget = 16;

struct Enumerator {
  int n;
  int W, H;
  std::vector<char> blocked;  // occupied or retired frontier cells
  std::vector<char> occ;      // occupied cells only
  std::vector<Cell> shape;
  std::vector<int> frontier;
  const std::function<void(const std::vector<Cell>&, int)>* fn;
  int bonds = 0;

  int index(int x, int y) const { return y * W + x; }

  void run() {
    shape.reserve(n);
    frontier.reserve(4 * n);
    int x0 = n - 1;  // origin; x ranges [0, 2n-2], y ranges [0, n-1]
    frontier.push_back(index(x0, 0));
    blocked[index(x0, 0)] = 1;
    recurse(0);
  }

  void recurse(size_t from) {
    for (size_t i = from; i < frontier.size(); ++i) {
      int id = frontier[i];
      int x = id % W, y = id / W;
      int gained = occupied_neighbors(x, y);
      shape.push_back({x - (n - 1), y});
      bonds += gained;
      occ[id] = 1;

      if (static_cast<int>(shape.size()) == n) {
        (*fn)(shape, 4 * n - 2 * bonds);
      } else {
        size_t mark = frontier.size();
        add_neighbor(x + 1, y);
        add_neighbor(x - 1, y);
        add_neighbor(x, y + 1);
        add_neighbor(x, y - 1);
        recurse(i + 1);
        while (frontier.size() > mark) {
          blocked[frontier.back()] = 0;
          frontier.pop_back();
        }
      }

      occ[id] = 0;
      bonds -= gained;
      shape.pop_back();
      // id stays blocked for the rest of this level and its subtrees.
    }
  }

  void add_neighbor(int x, int y) {
    if (x < 0 || x >= W || y < 0 || y >= H) return;
    if (y == 0 && x < n - 1) return;  // stay in the canonical half-plane
    int id = index(x, y);
    if (blocked[id]) return;
    blocked[id] = 1;
    frontier.push_back(id);
  }

  int occupied_neighbors(int x, int y) const {
    int c = 0;
    if (x + 1 < W && occ[index(x + 1, y)]) ++c;
    if (x - 1 >= 0 && occ[index(x - 1, y)]) ++c;
    if (y + 1 < H && occ[index(x, y + 1)]) ++c;
    if (y - 1 >= 0 && occ[index(x, y - 1)]) ++c;
    return c;
  }
};

}  // namespace

void for_each_polyomino(int n, const std::function<void(const std::vector<Cell>&, int)>& fn) {
  if (n < 1) throw std::invalid_argument("polyomino area must be >= 1");
  if (n > kEnumBudget) throw std::invalid_argument("enumeration budget is n <= 16");
  Enumerator e;
  e.n = n;
  e.W = 2 * n - 1;
  e.H = n;
  e.blocked.assign(static_cast<size_t>(e.W) * e.H, 0);
  e.occ.assign(static_cast<size_t>(e.W) * e.H, 0);
  e.fn = &fn;
  e.run();
}

std::vector<DualPolyomino> enumerate_polyominoes(int n, PolyominoSymmetry sym) {
  std::set<DualPolyomino> out;
  for_each_polyomino(n, [&](const std::vector<Cell>& cells, int) {
    DualPolyomino p(cells);
    switch (sym) {
      case PolyominoSymmetry::Translation: out.insert(p.normalized()); break;
      case PolyominoSymmetry::OneSided: out.insert(p.canonical_one_sided()); break;
      case PolyominoSymmetry::Free: out.insert(p.canonical_free()); break;
    }
  });
  return std::vector<DualPolyomino>(out.begin(), out.end());
}

BigInt count_polyominoes(int n, PolyominoSymmetry sym) {
  if (sym == PolyominoSymmetry::Translation) {
    BigInt count = 0;
    for_each_polyomino(n, [&](const std::vector<Cell>&, int) { ++count; });
    return count;
  }
  return BigInt(enumerate_polyominoes(n, sym).size());
}

BigInt count_min_perimeter_free(int n, std::vector<DualPolyomino>* shapes) {
  int best = INT32_MAX;
  std::set<DualPolyomino> canon;
  for_each_polyomino(n, [&](const std::vector<Cell>& cells, int perim) {
    if (perim > best) return;
    if (perim < best) {
      best = perim;
      canon.clear();
    }
    canon.insert(DualPolyomino(cells).canonical_free());
  });
  if (shapes) shapes->assign(canon.begin(), canon.end());
  return BigInt(canon.size());
}

// ---------------------------------------------------------------------------
// Droplet families
// ---------------------------------------------------------------------------

namespace {

// Connected polyominoes with the exact bounding box w x h and given area,
// collected translation-normalized. Enumerates complements (empty cells
// inside the box), so it is meant for areas close to w*h.
void shapes_in_box(int w, int h, int area, std::set<DualPolyomino>& out) {
  int total = w * h;
  int missing = total - area;
  if (missing < 0) return;
  std::vector<int> holes(missing);
  std::vector<char> filled(total);

  auto emit = [&]() {
    std::vector<Cell> cells;
    cells.reserve(area);
    for (int i = 0; i < total; ++i)
      if (filled[i]) cells.push_back({i % w, i / w});
    DualPolyomino p(std::move(cells));
    // exact box
    auto [bw, bh] = p.circumscribing_rectangle();
    if (bw != w || bh != h) return;
    if (!p.connected()) return;
    if (!p.is_monotone()) return;
    out.insert(p.normalized());
  };

  // Iterate over combinations of `missing` empty positions.
  std::fill(filled.begin(), filled.end(), 1);
  if (missing == 0) {
    emit();
    return;
  }
  for (int i = 0; i < missing; ++i) holes[i] = i;
  while (true) {
    for (int i = 0; i < missing; ++i) filled[holes[i]] = 0;
    emit();
    for (int i = 0; i < missing; ++i) filled[holes[i]] = 1;
    int k = missing - 1;
    while (k >= 0 && holes[k] == total - missing + k) --k;
    if (k < 0) break;
    ++holes[k];
    for (int i = k + 1; i < missing; ++i) holes[i] = holes[i - 1] + 1;
  }
}

}  // namespace

std::vector<DualPolyomino> enumerate_droplets(DropletClass cls, int l_star) {
  if (l_star < 4)
    throw std::invalid_argument("droplet families need l* >= 4; see the small-l* analysis");
  const int area = l_star * (l_star - 1) + 1;
  std::set<DualPolyomino> out;

  if (cls == DropletClass::A) {
    for (auto [w, h] : {std::pair{l_star, l_star - 1}, std::pair{l_star - 1, l_star}}) {
      DualPolyomino rect = DualPolyomino::rectangle(w, h);
      for (int u = 0; u < w; ++u) {
        std::vector<Cell> top = rect.cells(), bottom = rect.cells();
        top.push_back({u, h});
        bottom.push_back({u, -1});
        out.insert(DualPolyomino(top).normalized());
        out.insert(DualPolyomino(bottom).normalized());
      }
      for (int v = 0; v < h; ++v) {
        std::vector<Cell> right = rect.cells(), left = rect.cells();
        right.push_back({w, v});
        left.push_back({-1, v});
        out.insert(DualPolyomino(right).normalized());
        out.insert(DualPolyomino(left).normalized());
      }
    }
  } else {
    std::vector<std::pair<int, int>> boxes;
    if (cls == DropletClass::B) {
      boxes = {{l_star, l_star}, {l_star + 1, l_star - 1}, {l_star - 1, l_star + 1}};
    } else {
      for (int w = 1; w < 2 * l_star; ++w) {
        int h = 2 * l_star - w;
        if (h < 1 || w * h < area) continue;
        boxes.push_back({w, h});
      }
    }
    for (auto [w, h] : boxes) shapes_in_box(w, h, area, out);
  }
  return std::vector<DualPolyomino>(out.begin(), out.end());
}

BigInt n_star(CountingRegion region, int l_star) {
  switch (region) {
    case CountingRegion::Trivial:
      return 1;
    case CountingRegion::RA:
      if (l_star < 4) throw std::invalid_argument("N* forms need l* >= 4; see small-l* analysis");
      return BigInt(8) * l_star - 4;
    case CountingRegion::RB: {
      if (l_star < 4) throw std::invalid_argument("N* forms need l* >= 4; see small-l* analysis");
      PowerSeries q = series_q(l_star);
      PowerSeries r = series_r(l_star);
      return 8 * (q[l_star - 1] + r[l_star - 2]);
    }
    case CountingRegion::RC: {
      if (l_star < 4) throw std::invalid_argument("N* forms need l* >= 4; see small-l* analysis");
      PowerSeries q = series_q(l_star);
      PowerSeries r = series_r(l_star);
      BigInt acc = q[l_star - 1];
      std::int64_t cmax = isqrt64(l_star - 1);
      for (std::int64_t c = 1; c <= cmax; ++c) acc += r[static_cast<int>(l_star - c * c - 1)];
      return 8 * acc;
    }
  }
  throw std::logic_error("bad counting region");
}

}  // namespace kwl
