#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kwl {

// Exact rational arithmetic for energy bookkeeping. All barrier and
// detailed-balance checks in this project compare energies for exact
// equality, so energies are never carried as floating point except in
// the sampling engine (see Rational::to_double).
//
// Numerators and denominators stay tiny here (parameters are short
// decimals, energies are small integer combinations of them), but all
// operations go through 128-bit intermediates and throw on overflow
// rather than wrap.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  // Parses "3", "-2.5", "0.82", "1/4". Used for parameter input so that
  // e.g. 0.1 is exactly 1/10.
  static Rational parse(std::string_view s);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }

  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  // Ceiling of the exact value, for l* = ceil(d1/eps).
  std::int64_t ceil() const;
  std::int64_t floor() const;

  std::string str() const;

 private:
  void normalize();
  std::int64_t num_;
  std::int64_t den_;  // > 0 always
};

inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

// Energies are exact rationals throughout the analysis modules.
using Energy = Rational;

}  // namespace kwl
