#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gl2sup/rational.hpp"

namespace gl2sup {

using Complex = std::complex<double>;

// Structure of (Z/p^level)^*: generators with their orders and a
// discrete log table. For odd p the single generator is a primitive root
// modulo p^2, so it generates at every level. For p = 2 the generators are
// -1 and 5.
class UnitGroup {
 public:
  static std::shared_ptr<const UnitGroup> get(std::uint64_t p, unsigned level);

  std::uint64_t prime() const { return p_; }
  unsigned level() const { return level_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t order() const { return order_; }
  // Exponent of the group, the lcm of the generator orders.
  std::uint64_t exponent() const { return exponent_; }
  const std::vector<std::uint64_t>& generators() const { return generators_; }
  const std::vector<std::uint64_t>& orders() const { return orders_; }

  // Exponent vector of the unit residue u with respect to generators().
  std::vector<std::uint64_t> log(std::uint64_t u) const;

 private:
  UnitGroup(std::uint64_t p, unsigned level);
  std::uint64_t p_;
  unsigned level_;
  std::uint64_t modulus_;
  std::uint64_t order_;
  std::uint64_t exponent_;
  std::vector<std::uint64_t> generators_;
  std::vector<std::uint64_t> orders_;
  std::vector<std::uint32_t> index_;  // residue -> flattened exponent vector
};

std::uint64_t smallest_primitive_root_mod_p2(std::uint64_t p);

// A character of Q_p^* trivial on p, defined modulo p^level. Exponent
// vector e means chi(prod g_i^{k_i}) = exp(2 pi i sum e_i k_i / ord_i).
class ExtendedCharacter {
 public:
  ExtendedCharacter(std::uint64_t p, unsigned level, std::vector<std::uint64_t> exponents);
  static ExtendedCharacter trivial(std::uint64_t p);

  std::uint64_t prime() const { return p_; }
  unsigned level() const { return level_; }
  const std::vector<std::uint64_t>& exponents() const { return exponents_; }
  unsigned conductor_exponent() const { return conductor_; }
  bool is_trivial() const { return conductor_ == 0; }
  bool is_ramified() const { return conductor_ > 0; }

  // chi(u) = exp(2 pi i num / group exponent); returns num.
  std::uint64_t phase(std::uint64_t u) const;
  std::uint64_t phase_denominator() const { return group_->exponent(); }
  Complex on_residue(std::uint64_t u) const;
  // Value at a nonzero rational, using chi(p) = 1.
  Complex operator()(const Rational& x) const;
  int sign_at_minus_one() const;

  ExtendedCharacter inverse() const;
  ExtendedCharacter lift(unsigned level) const;
  ExtendedCharacter operator*(const ExtendedCharacter& o) const;
  bool operator==(const ExtendedCharacter& o) const;

  std::string to_string() const;

 private:
  unsigned compute_conductor() const;
  std::uint64_t p_;
  unsigned level_;
  std::vector<std::uint64_t> exponents_;
  std::shared_ptr<const UnitGroup> group_;
  unsigned conductor_;
};

// Every character of (Z/p^level)^*, trivial one first, then
// lexicographic in the exponent vector.
std::vector<ExtendedCharacter> enumerate_characters(std::uint64_t p, unsigned level);

unsigned conductor(const ExtendedCharacter& chi);

// p-power fractional part {r}_p = num / p^k in [0, 1).
std::pair<std::uint64_t, std::uint64_t> p_fractional_part(const Rational& r, std::uint64_t p);
// psi(r) = exp(2 pi i {r}_p).
Complex additive_character(const Rational& r, std::uint64_t p);

// epsilon(1/2, mu) together with the data that produced it.
struct EpsilonDatum {
  ExtendedCharacter character;
  Complex value;
  unsigned conductor;
};

struct GaussSumPoint {
  Complex value;
  unsigned modulus_exponent;  // K in the finite sum
};

Complex gauss_sum_bruteforce(const Rational& x, const ExtendedCharacter& mu);
GaussSumPoint gauss_sum_bruteforce_detail(const Rational& x, const ExtendedCharacter& mu);
// Closed form; eps_mu_inverse must be epsilon_factor(mu.inverse()) when mu
// is ramified and is ignored otherwise.
Complex gauss_sum_closed(const Rational& x, const ExtendedCharacter& mu,
                         const EpsilonDatum* eps_mu_inverse);
Complex gauss_sum_closed(const Rational& x, const ExtendedCharacter& mu);
EpsilonDatum epsilon_factor(const ExtendedCharacter& mu);

// L(s, chi)^{-1} as a polynomial in X = q^{-s}: coefficients {1, -chi(p)} if
// unramified, {1} otherwise.
std::vector<Complex> local_l_factor_inverse(const ExtendedCharacter& chi);

}  // namespace gl2sup
