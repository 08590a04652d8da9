#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace gl2sup {

using Integer = mpz_class;
using Rational = mpq_class;

// p^k as an exact rational, k may be negative.
Rational prime_power(std::uint64_t p, int k);

// v_p of a nonzero integer.
int p_valuation(const Integer& a, std::uint64_t p);

// Small modular helpers on 64-bit residues.
std::uint64_t ipow(std::uint64_t base, unsigned exp);
std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e, std::uint64_t m);
// Throws std::domain_error when a is not invertible.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t euler_phi_prime_power(std::uint64_t p, unsigned k);
bool is_prime(std::uint64_t n);

// Reduction of a p-integral rational modulo p^k.
std::uint64_t reduce_mod_prime_power(const Rational& x, std::uint64_t p, unsigned k);

std::string to_string(const Rational& x);

}  // namespace gl2sup
