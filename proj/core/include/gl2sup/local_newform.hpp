#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gl2sup/characters.hpp"
#include "gl2sup/cosets.hpp"
#include "gl2sup/local_field.hpp"

namespace gl2sup {

enum class Regime { Max, High, DiagOnly, SphericalExcluded };

std::string to_string(Regime r);

class UnsupportedRegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// pi = chi1 [+] chi2 with both characters trivial on p. The constructor
// orders the pair so that a1 >= a2.
class PrincipalSeriesLocal {
 public:
  PrincipalSeriesLocal(ExtendedCharacter chi1, ExtendedCharacter chi2);

  std::uint64_t prime() const { return chi1_.prime(); }
  const ExtendedCharacter& chi1() const { return chi1_; }
  const ExtendedCharacter& chi2() const { return chi2_; }
  const ExtendedCharacter& omega() const { return omega_; }
  int a1() const { return a1_; }
  int a2() const { return a2_; }
  int n() const { return a1_ + a2_; }
  int c() const { return static_cast<int>(omega_.conductor_exponent()); }
  Regime regime() const;
  // chi1^{-1} [+] chi2^{-1}
  PrincipalSeriesLocal contragredient() const;
  std::string to_string() const;

 private:
  ExtendedCharacter chi1_, chi2_, omega_;
  int a1_, a2_;
};

// Default representation with the given conductor exponents: chi_i is the
// character of level a_i with exponent vector (1) (p odd) or the standard
// primitive one for p = 2.
PrincipalSeriesLocal make_principal_series(std::uint64_t p, int a1, int a2);
ExtendedCharacter primitive_character(std::uint64_t p, int a);

// W(a(p^m)) from the diagonal table.
Complex diagonal_value(const PrincipalSeriesLocal& rep, int m);

enum class MagnitudeFlag { Exact, Bound, Zero };
std::string to_string(MagnitudeFlag f);

struct MagnitudeEntry {
  double value;
  MagnitudeFlag flag;
};

// A unit residue known modulo p^precision.
struct NuAnchor {
  std::uint64_t residue = 1;
  unsigned precision = 0;
};

// Closed form in the maximally ramified case. nu1 is the class of nu_1.
MagnitudeEntry magnitude_max(const PrincipalSeriesLocal& rep, int m, int ell, std::uint64_t nu, const NuAnchor& nu1);

enum class HighTableVariant {
  // m > -n on the whole l = a2 row
  Corrected,
  // the l = a2 row capped at m < -a1 (first range) or m < -a2 (second range)
  AsPrinted,
};

// Closed form for 1 <= a2 < n/2 < a1. nu1_inverse is the class of 1/nu_1.
MagnitudeEntry magnitude_high(const PrincipalSeriesLocal& rep, int m, int ell, std::uint64_t nu,
                              const NuAnchor& nu1_inverse, HighTableVariant variant = HighTableVariant::Corrected);

// c_{m,l}(mu) for m >= -l-n. Values past the stored window are extended
// with the exact recurrence coming from L(s, mu pi)^{-1}.
class CoefficientVector {
 public:
  CoefficientVector(int ell, ExtendedCharacter mu, int low, std::vector<Complex> values,
                    std::vector<Complex> lhs_factor, double residual);

  int ell() const { return ell_; }
  const ExtendedCharacter& mu() const { return mu_; }
  int low() const { return low_; }
  int high() const { return low_ + static_cast<int>(values_.size()) - 1; }
  double residual() const { return residual_; }
  Complex at(int m) const;

 private:
  int ell_;
  ExtendedCharacter mu_;
  int low_;
  std::vector<Complex> values_;
  std::vector<Complex> lhs_factor_;
  double residual_;
};

inline constexpr double kWindowResidualTolerance = 1e-8;

CoefficientVector solve_basic_identity(const PrincipalSeriesLocal& rep, int ell, const ExtendedCharacter& mu);

// sum_mu c_{m,l}(mu) mu(nu); coeffs must cover every mu in X(l).
Complex fourier_synthesize(const std::vector<CoefficientVector>& coeffs, int m, std::uint64_t nu);

// Whittaker newform values from the basic identity, for l in [0, ell_max].
// Immutable after construction.
class WhittakerOracle {
 public:
  explicit WhittakerOracle(PrincipalSeriesLocal rep, int ell_max = -1);

  const PrincipalSeriesLocal& rep() const { return rep_; }
  int ell_max() const { return ell_max_; }
  const std::vector<CoefficientVector>& coefficients(int ell) const;

  // W(g_{m,l,nu})
  Complex value(int m, int ell, std::uint64_t nu) const;
  double magnitude(int m, int ell, std::uint64_t nu) const { return std::abs(value(m, ell, nu)); }
  // W(g) for any g, through the double coset reduction.
  Complex value_at(const LocalMatrix& g) const;

 private:
  PrincipalSeriesLocal rep_;
  int ell_max_;
  std::vector<std::vector<CoefficientVector>> coeffs_;
};

std::shared_ptr<const WhittakerOracle> make_oracle(const PrincipalSeriesLocal& rep, int ell_max = -1);

inline constexpr double kZeroThreshold = 1e-8;

// nu_1 (regime Max) or 1/nu_1 (regime High) read off the oracle, at the
// finest precision the support pattern determines.
NuAnchor discover_nu_anchor(const WhittakerOracle& oracle);
// The anchor implied by each row l separately (precision 0 when the row
// carries no information).
std::vector<NuAnchor> nu_anchor_by_row(const WhittakerOracle& oracle);

// Closed-form magnitude for either supported regime.
MagnitudeEntry closed_form_magnitude(const PrincipalSeriesLocal& rep, int m, int ell, std::uint64_t nu,
                                     const NuAnchor& anchor, HighTableVariant variant = HighTableVariant::Corrected);

struct OracleComparison {
  std::size_t points = 0;
  std::size_t exact_checked = 0;
  std::size_t bound_checked = 0;
  std::size_t mismatches = 0;
  double max_abs_error = 0.0;
  std::vector<std::string> details;
  bool ok() const { return mismatches == 0; }
};

// Compare the oracle with the closed-form table on 0 <= l <= n/2 and
// m in [m_lo, m_hi]; zero sets must agree exactly and exact values within tol.
OracleComparison compare_with_closed_form(const WhittakerOracle& oracle, int m_lo, int m_hi, double tol = 1e-8,
                                          HighTableVariant variant = HighTableVariant::Corrected);

// W_pi(g A) with A = antidiag(1, p^n).
Complex conjugate_value(const WhittakerOracle& oracle, const CosetTriple& t);

struct AlphaReport {
  double alpha = 0.0;          // ratio at the first nonvanishing point
  double max_deviation = 0.0;  // max | ratio - alpha | over nonvanishing points
  std::size_t points = 0;
  std::size_t nonvanishing = 0;
};

// |W_pi(g A)| / |W_pi~(g)| over all triples with 0 <= l <= n and m in range.
AlphaReport alpha_modulus(const WhittakerOracle& pi, const WhittakerOracle& pi_tilde, int m_lo, int m_hi);

// (1/phi(p^l)) sum_nu |W(g_{m,l,nu})|^2
double l2_average(const WhittakerOracle& oracle, int m, int ell);

struct MagnitudeRow {
  int m;
  int ell;
  std::uint64_t nu;
  double value;
  MagnitudeFlag flag;
};

struct WhittakerMagnitudeTable {
  PrincipalSeriesLocal rep;
  NuAnchor anchor;
  std::vector<MagnitudeRow> rows;
};

WhittakerMagnitudeTable build_magnitude_table(const PrincipalSeriesLocal& rep, const NuAnchor& anchor, int m_lo,
                                              int m_hi);
void write_magnitude_csv(std::ostream& os, const WhittakerMagnitudeTable& table);

}  // namespace gl2sup
