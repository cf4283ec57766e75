#pragma once

#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kwl/geometry.hpp"

namespace kwl {

using BigInt = boost::multiprecision::cpp_int;

// Truncated formal power series with exact big-integer coefficients.
class PowerSeries {
 public:
  PowerSeries(int order, BigInt constant = 0);
  static PowerSeries monomial(int order, int exponent, BigInt coeff = 1);

  int order() const { return static_cast<int>(coeff_.size()) - 1; }
  const BigInt& operator[](int k) const;
  BigInt& at(int k) { return coeff_.at(k); }

  PowerSeries operator+(const PowerSeries& o) const;
  PowerSeries operator-(const PowerSeries& o) const;
  PowerSeries operator*(const PowerSeries& o) const;
  PowerSeries scaled(const BigInt& f) const;
  // Substitution x -> x^m (coefficients spread to multiples of m).
  PowerSeries compose_xpow(int m) const;
  // Multiplicative inverse; requires constant term 1.
  PowerSeries reciprocal() const;
  // Exact coefficient-wise division; throws if any coefficient has a
  // remainder (Burnside counts are integral, so a remainder is a bug).
  PowerSeries divide_exact(int divisor) const;

  friend bool operator==(const PowerSeries& a, const PowerSeries& b) {
    return a.coeff_ == b.coeff_;
  }

 private:
  std::vector<BigInt> coeff_;
};

// Square-count series s(x) = 1 + sum_k x^{k^2} prod_{j<=k} 1/(1-x^{2j}).
PowerSeries series_s(int order);
// Partition series a(x) = prod_j 1/(1-x^j).
PowerSeries series_a(int order);
// r(x) = (a^4 + 3 a(x^2)^2) / 4.
PowerSeries series_r(int order);
// q(x) = (a^4 + 3 a(x^2)^2 + 2 s^2 a(x^2) + 2 a(x^4)) / 8.
PowerSeries series_q(int order);

std::int64_t isqrt64(std::int64_t n);

// Number of polyominoes (free) of area n with minimal perimeter.
BigInt e_count(std::int64_t n);

enum class PolyominoSymmetry { Translation, OneSided, Free };

// Exhaustive enumeration, one representative per symmetry class.
// Budget: n <= 16.
std::vector<DualPolyomino> enumerate_polyominoes(int n, PolyominoSymmetry sym);

// Streams every translation class of area n together with its perimeter.
// Same budget as above; the counting path of the census and its tests.
void for_each_polyomino(int n, const std::function<void(const std::vector<Cell>&, int)>& fn);

BigInt count_polyominoes(int n, PolyominoSymmetry sym);

// Free polyominoes of area n achieving the minimal perimeter, by full
// enumeration. Returns the count and optionally collects the shapes.
BigInt count_min_perimeter_free(int n, std::vector<DualPolyomino>* shapes = nullptr);
int min_perimeter(int n);

enum class DropletClass { A, B, C };

// The protocritical shape families at the given critical side length l >= 4,
// one representative per translation class, sorted:
//   A: l x (l-1) rectangle plus a protuberance on one of the four sides;
//   B: monotone with circumscribing rectangle l x l or (l+1) x (l-1);
//   C: monotone with circumscribing rectangle of perimeter 4l.
// All have area l(l-1)+1.
std::vector<DualPolyomino> enumerate_droplets(DropletClass cls, int l_star);

enum class CountingRegion { Trivial, RA, RB, RC };

// Protocritical droplet counts modulo shifts: 1 in the trivial subregion,
// 8l-4 in RA, and the generating-function forms in RB/RC (valid for l >= 4).
BigInt n_star(CountingRegion region, int l_star);

}  // namespace kwl
