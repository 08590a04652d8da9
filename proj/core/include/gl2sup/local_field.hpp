#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "gl2sup/rational.hpp"

namespace gl2sup {

// p-adic valuation with a typed infinity for zero.
class Valuation {
 public:
  constexpr explicit Valuation(int v) : value_(v), infinite_(false) {}
  static constexpr Valuation infinity() { return Valuation(); }

  constexpr bool is_infinite() const { return infinite_; }
  int value() const {
    if (infinite_) throw std::domain_error("valuation of zero is infinite");
    return value_;
  }

  constexpr bool operator==(const Valuation& o) const {
    return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
  }
  constexpr std::strong_ordering operator<=>(const Valuation& o) const {
    if (infinite_ || o.infinite_) {
      if (infinite_ == o.infinite_) return std::strong_ordering::equal;
      return infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return value_ <=> o.value_;
  }
  // Comparison against a finite integer, infinity dominates.
  constexpr bool at_least(int k) const { return infinite_ || value_ >= k; }

 private:
  constexpr Valuation() : value_(0), infinite_(true) {}
  int value_;
  bool infinite_;
};

std::ostream& operator<<(std::ostream& os, const Valuation& v);

Valuation valuation(const Rational& x, std::uint64_t p);

// An element of Q_p represented exactly by a rational number.
class LocalScalar {
 public:
  LocalScalar(std::uint64_t p, Rational value);
  LocalScalar(std::uint64_t p, long value) : LocalScalar(p, Rational(value)) {}

  std::uint64_t prime() const { return p_; }
  const Rational& value() const { return value_; }
  bool is_zero() const { return value_ == 0; }
  Valuation valuation() const { return gl2sup::valuation(value_, p_); }
  // |x|_p as a double.
  double abs() const;
  // x = p^v u, returns u (an exact rational unit).
  Rational unit_part() const;
  // Unit part reduced modulo p^k.
  std::uint64_t unit_residue(unsigned k) const;

  LocalScalar operator+(const LocalScalar& o) const;
  LocalScalar operator-(const LocalScalar& o) const;
  LocalScalar operator*(const LocalScalar& o) const;
  LocalScalar operator/(const LocalScalar& o) const;
  bool operator==(const LocalScalar& o) const { return p_ == o.p_ && value_ == o.value_; }

 private:
  void check_same(const LocalScalar& o) const;
  std::uint64_t p_;
  Rational value_;
};

Rational unit_part(const Rational& x, std::uint64_t p);
std::uint64_t unit_residue(const Rational& x, std::uint64_t p, unsigned k);

class SingularMatrixError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// 2x2 matrix over Q_p, stored row major.
class LocalMatrix {
 public:
  LocalMatrix(std::uint64_t p, Rational a, Rational b, Rational c, Rational d);

  static LocalMatrix identity(std::uint64_t p);
  static LocalMatrix w(std::uint64_t p);
  static LocalMatrix a(std::uint64_t p, const Rational& y);
  static LocalMatrix n(std::uint64_t p, const Rational& x);
  static LocalMatrix z(std::uint64_t p, const Rational& y);
  static LocalMatrix diag(std::uint64_t p, const Rational& d1, const Rational& d2);
  // [[0, 1], [p^n, 0]]
  static LocalMatrix antidiag_pn(std::uint64_t p, int n);

  std::uint64_t prime() const { return p_; }
  const Rational& operator()(int i, int j) const { return m_[2 * i + j]; }
  const std::array<Rational, 4>& entries() const { return m_; }

  Rational det() const;
  LocalMatrix inverse() const;
  LocalMatrix operator*(const LocalMatrix& o) const;
  LocalMatrix scaled(const Rational& s) const;
  bool operator==(const LocalMatrix& o) const;

  bool is_integral() const;
  bool in_gl2_zp() const;
  std::string to_string() const;

 private:
  std::uint64_t p_;
  std::array<Rational, 4> m_;
};

std::ostream& operator<<(std::ostream& os, const LocalMatrix& g);

// Membership in K1(p^n) = {k in GL2(Z_p): a = 1, c = 0 mod p^n}.
bool in_k1(const LocalMatrix& g, int n);
// Membership in K2(p^n) = {k in GL2(Z_p): c = 0, d = 1 mod p^n} by direct test.
bool in_k2(const LocalMatrix& g, int n);
// Same as in_k2 but cross-checked against A^{-1} g A in K1(p^n) with
// A = antidiag(1, p^n). Throws std::logic_error if the two disagree.
bool conjugate_k2_check(const LocalMatrix& g, int n);

}  // namespace gl2sup
