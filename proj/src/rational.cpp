#include "kwl/rational.hpp"

namespace kwl {

namespace {

using i128 = __int128;

std::int64_t checked(i128 v, const char* what) {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN)) {
    throw std::overflow_error(std::string("rational overflow in ") + what);
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

void Rational::normalize() {
  if (den_ == 0) throw std::domain_error("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::parse(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    std::int64_t n = std::stoll(std::string(s.substr(0, slash)));
    std::int64_t d = std::stoll(std::string(s.substr(slash + 1)));
    return Rational(n, d);
  }
  bool neg = false;
  size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  i128 num = 0;
  i128 den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("bad rational literal: " + std::string(s));
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("bad rational literal: " + std::string(s));
    seen_digit = true;
    num = num * 10 + (c - '0');
    if (seen_dot) den *= 10;
    if (den > i128(1000000000000000000LL)) throw std::overflow_error("rational literal too long");
  }
  if (!seen_digit) throw std::invalid_argument("bad rational literal: " + std::string(s));
  if (neg) num = -num;
  return Rational(checked(num, "parse"), checked(den, "parse"));
}

Rational& Rational::operator+=(const Rational& o) {
  i128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
  i128 d = i128(den_) * o.den_;
  num_ = checked(n, "add");
  den_ = checked(d, "add");
  normalize();
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += Rational(-o.num_, o.den_); }

Rational& Rational::operator*=(const Rational& o) {
  i128 n = i128(num_) * o.num_;
  i128 d = i128(den_) * o.den_;
  num_ = checked(n, "mul");
  den_ = checked(d, "mul");
  normalize();
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  return *this *= Rational(o.den_, o.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::int64_t Rational::ceil() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace kwl
