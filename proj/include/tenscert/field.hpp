#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cassert>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <random>
#include <string>
#include <string_view>

#include "tenscert/errors.hpp"

namespace tenscert {

using BigInt = boost::multiprecision::mpz_int;
using BigRat = boost::multiprecision::mpq_rational;

// Unbiased draw from [0, n) via rejection; deterministic given the generator state.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  assert(n > 0);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

// Element of GF(q), q prime and < 2^16, canonically stored in [0, q).
// The modulus travels with the element so matrices of elements stay
// self-describing; products fit a 32-bit intermediate.
class Fp {
 public:
  Fp(std::uint32_t value, std::uint32_t q) : v_(value % q), q_(q) {}

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return q_; }
  bool is_zero() const { return v_ == 0; }

  friend Fp operator+(Fp a, Fp b) {
    assert(a.q_ == b.q_);
    std::uint32_t s = a.v_ + b.v_;
    if (s >= a.q_) s -= a.q_;
    return Fp::raw(s, a.q_);
  }
  friend Fp operator-(Fp a, Fp b) {
    assert(a.q_ == b.q_);
    std::uint32_t s = a.v_ + a.q_ - b.v_;
    if (s >= a.q_) s -= a.q_;
    return Fp::raw(s, a.q_);
  }
  friend Fp operator*(Fp a, Fp b) {
    assert(a.q_ == b.q_);
    return Fp::raw(a.v_ * b.v_ % a.q_, a.q_);
  }
  friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
  Fp operator-() const { return Fp::raw(v_ == 0 ? 0 : q_ - v_, q_); }

  Fp& operator+=(Fp b) { return *this = *this + b; }
  Fp& operator-=(Fp b) { return *this = *this - b; }
  Fp& operator*=(Fp b) { return *this = *this * b; }
  Fp& operator/=(Fp b) { return *this = *this / b; }

  friend bool operator==(Fp a, Fp b) {
    assert(a.q_ == b.q_);
    return a.v_ == b.v_;
  }
  friend bool operator!=(Fp a, Fp b) { return !(a == b); }

  Fp inverse() const {
    if (v_ == 0) throw DivisionByZero();
    // extended Euclid on (v, q)
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = q_, new_r = v_;
    while (new_r != 0) {
      std::int64_t quot = r / new_r;
      std::int64_t tmp = t - quot * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - quot * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (t < 0) t += q_;
    return Fp::raw(static_cast<std::uint32_t>(t), q_);
  }

  friend std::ostream& operator<<(std::ostream& os, Fp a);

 private:
  static Fp raw(std::uint32_t v, std::uint32_t q) {
    Fp e;
    e.v_ = v;
    e.q_ = q;
    return e;
  }
  Fp() : v_(0), q_(0) {}

  std::uint32_t v_;
  std::uint32_t q_;
};

inline std::ostream& operator<<(std::ostream& os, Fp a) { return os << a.v_; }

// Exact rational with canonical representation: gcd(|num|, den) = 1, den > 0.
// Backed by GMP, which canonicalizes on every construction and operation.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
  explicit Rational(BigRat v) : v_(std::move(v)) {}
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw DivisionByZero();
    v_ = BigRat(num, den);
  }

  bool is_zero() const { return v_.is_zero(); }
  BigInt numerator() const { return boost::multiprecision::numerator(v_); }
  BigInt denominator() const { return boost::multiprecision::denominator(v_); }
  const BigRat& value() const { return v_; }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(BigRat(a.v_ + b.v_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(BigRat(a.v_ - b.v_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(BigRat(a.v_ * b.v_)); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw DivisionByZero();
    return Rational(BigRat(a.v_ / b.v_));
  }
  Rational operator-() const { return Rational(BigRat(-v_)); }

  Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
  Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
  Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }
  Rational& operator/=(const Rational& b) {
    if (b.is_zero()) throw DivisionByZero();
    v_ /= b.v_;
    return *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }

  Rational inverse() const {
    if (is_zero()) throw DivisionByZero();
    return Rational(BigRat(1 / v_));
  }

  std::string to_string() const { return v_.str(); }

  // Accepts "p" and "p/q" with optional leading minus signs; q must be nonzero.
  static Rational parse(std::string_view text);

  friend std::ostream& operator<<(std::ostream& os, const Rational& a);

 private:
  BigRat v_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& a) { return os << a.value(); }

namespace detail {

inline BigInt parse_integer(std::string_view text) {
  if (text.empty()) throw ParseError("empty integer literal");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw ParseError("sign without digits");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9')
      throw ParseError("invalid integer literal: " + std::string(text));
  }
  return BigInt(std::string(text));
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  const std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(detail::parse_integer(text), BigInt(1));
  }
  const BigInt num = detail::parse_integer(text.substr(0, slash));
  const BigInt den = detail::parse_integer(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in rational literal: " + std::string(text));
  return Rational(num, den);
}

// GF(q) as a field object. Sampling is uniform over [0, q).
class PrimeField {
 public:
  using Element = Fp;

  explicit PrimeField(std::uint32_t q) : q_(q) {
    if (q < 2 || q >= (1u << 16) || !is_prime(q))
      throw NotApplicable("modulus must be a prime below 2^16, got " + std::to_string(q));
  }

  std::uint32_t modulus() const { return q_; }
  Fp zero() const { return Fp(0, q_); }
  Fp one() const { return Fp(1, q_); }

  Fp element(long long n) const {
    long long m = n % static_cast<long long>(q_);
    if (m < 0) m += q_;
    return Fp(static_cast<std::uint32_t>(m), q_);
  }

  // Reduction of p/q mod the modulus; throws when the denominator vanishes mod q.
  Fp reduce(const Rational& x) const {
    const Fp num = reduce(x.numerator());
    const Fp den = reduce(x.denominator());
    if (den.is_zero()) throw DivisionByZero();
    return num / den;
  }

  Fp reduce(const BigInt& n) const {
    BigInt m = n % q_;
    if (m < 0) m += q_;
    return Fp(static_cast<std::uint32_t>(m), q_);
  }

  Fp random(std::mt19937_64& gen) const {
    return Fp(static_cast<std::uint32_t>(uniform_below(gen, q_)), q_);
  }

  static bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  std::uint32_t q_;
};

// The exact rationals as a field object. Sampling draws uniform integers in
// [-99, 99], which keeps tangent matrices integral.
class RationalField {
 public:
  using Element = Rational;

  Rational zero() const { return Rational(0); }
  Rational one() const { return Rational(1); }
  Rational element(long long n) const { return Rational(n); }

  Rational random(std::mt19937_64& gen) const {
    return Rational(static_cast<long long>(uniform_below(gen, 199)) - 99);
  }
};

}  // namespace tenscert
