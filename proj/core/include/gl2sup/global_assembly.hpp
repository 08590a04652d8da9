#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "gl2sup/eigenvalues.hpp"
#include "gl2sup/global_spec.hpp"
#include "gl2sup/local_newform.hpp"

namespace gl2sup {

// Local coordinates of g_p: the triple (m, l, nu) and whether the
// contragredient newform is used at p (p in S).
struct LocalCoordinate {
  std::uint64_t p = 0;
  int n = 0;
  int m = 0;
  int ell = 0;
  std::uint64_t nu = 1;
  bool conjugated = false;
};

struct DomainPoint {
  double x = 0.0;
  double y = 1.0;
  std::vector<LocalCoordinate> locals;  // same order as spec.primes

  // Primes in S joined by '.', or "-" when S is empty.
  std::string conjugation_set() const;
  std::string to_string() const;
};

// Throws std::invalid_argument unless the point lies in the generating
// domain: y >= sqrt(3)/2, l_p <= n_p/2, m_p in {-floor(n_p/2), -ceil(n_p/2)}.
void validate_domain_point(const NewformSpecGlobal& spec, const DomainPoint& point);

// Every point of the generating domain on the configured x and y grids.
std::vector<DomainPoint> enumerate_domain_points(const NewformSpecGlobal& spec);
// A seeded subset of at most max_points points, in enumeration order.
std::vector<DomainPoint> sample_domain_points(const NewformSpecGlobal& spec, std::size_t max_points,
                                              std::uint64_t seed);

struct StarredIntegers {
  std::uint64_t L = 1, C = 1, N = 1, N1 = 1, N2 = 1;
};

struct RamificationProfile {
  std::vector<std::uint64_t> high, low, high_minus, high_equal, high_plus;
  std::uint64_t L = 1, N1 = 1, N2 = 1;
  StarredIntegers minus, equal, plus;
  // L+ C+ / N+
  std::uint64_t modulus() const;
};

RamificationProfile ramification_profile(const NewformSpecGlobal& spec, const DomainPoint& point);

// One local factor |W_p^S(g_{m,l,nu})|. High primes read the newform
// oracles of pi_p and its contragredient; low primes use the model
// sqrt(l2) p^{-(m+n)/4} 1_{m >= -n}, whose unit averages reproduce the
// configured L^2 constant.
class LocalFactor {
 public:
  LocalFactor(const PrimeData& data, int ell_max);

  const PrimeData& data() const { return data_; }
  std::uint64_t prime() const { return data_.p; }
  int ell_max() const { return ell_max_; }
  double magnitude(bool conjugated, int m, int ell, std::uint64_t nu) const;
  // (1/phi(p^l)) sum_nu magnitude^2
  double l2_average(bool conjugated, int m, int ell) const;
  // Largest magnitude anywhere, used by tail certificates.
  double sup_magnitude() const { return sup_; }
  const WhittakerOracle* oracle(bool conjugated) const;

 private:
  double raw(bool conjugated, int m, int ell, std::uint64_t nu) const;
  PrimeData data_;
  int ell_max_;
  int m_hi_;
  std::shared_ptr<const WhittakerOracle> pi_, pi_tilde_;
  // [conj][ell], row-major in (m - m_lo(ell), nu)
  std::vector<std::vector<double>> table_[2];
  double sup_ = 1.0;
};

// Immutable per-spec state shared by every evaluation.
class GlobalContext {
 public:
  // full_ell = true tabulates l up to n_p (needed for points outside the
  // generating domain); otherwise l <= n_p/2.
  explicit GlobalContext(NewformSpecGlobal spec, bool full_ell = false);

  const NewformSpecGlobal& spec() const { return spec_; }
  const LocalFactor& factor(std::size_t i) const { return factors_[i]; }
  std::size_t size() const { return factors_.size(); }

  // prod_{p | N} |W_p^S(a(q) g_p)|
  double local_product(const DomainPoint& point, const Rational& q) const;
  double sup_local_product() const;

 private:
  NewformSpecGlobal spec_;
  std::vector<LocalFactor> factors_;
};

struct AdelicElement {
  double x = 0.0;
  double y = 1.0;
  std::vector<LocalMatrix> finite;  // one per prime of the spec, in order
};

// Per-prime triples via the translate classification, mirrored into
// l_p <= n_p/2 where needed (p then joins S). Every step is certified with
// an exact coset witness.
DomainPoint generating_domain_reduction(const AdelicElement& g, const NewformSpecGlobal& spec);
// The raw triples of g without mirroring (l_p may exceed n_p/2).
DomainPoint direct_coordinates(const AdelicElement& g, const NewformSpecGlobal& spec);

struct SupportProgression {
  Rational scale;
  std::uint64_t modulus = 1;
  std::vector<std::uint64_t> residues;  // in [1, modulus]
  std::uint64_t coprimality_modulus = 1;
  std::uint64_t s = 1, u = 1;

  bool empty() const { return residues.empty(); }
  bool contains_index(std::int64_t n) const;
};

// Integers composed of the given primes, up to bound, increasing.
std::vector<std::uint64_t> smooth_numbers(const std::vector<std::uint64_t>& primes, std::uint64_t bound);

SupportProgression support_progression(const GlobalContext& ctx, const DomainPoint& point,
                                       const RamificationProfile& profile, std::uint64_t s, std::uint64_t u);

// q = a / (N L) with 0 < |a| <= bound and nonvanishing local product.
std::vector<std::int64_t> brute_force_support(const GlobalContext& ctx, const DomainPoint& point,
                                              std::int64_t bound);
// The same window, listed from the progressions.
std::vector<std::int64_t> progression_support(const GlobalContext& ctx, const DomainPoint& point,
                                              std::int64_t bound);

struct SupportCheck {
  std::size_t brute = 0;
  std::size_t progression = 0;
  std::size_t missing = 0;  // in the support, not in a progression
  std::size_t extra = 0;    // in a progression, not in the support
  bool exact() const { return missing == 0 && extra == 0; }
  bool sound() const { return missing == 0; }
};

SupportCheck compare_support(const GlobalContext& ctx, const DomainPoint& point, std::int64_t bound);

struct Truncation {
  double kappa_cutoff = 40.0;
  std::uint64_t smax = 10000;
};

Truncation default_truncation(const NewformSpecGlobal& spec);

struct MajorantReport {
  double value = 0.0;
  double tail_certificate = 0.0;
  std::size_t terms = 0;
  std::uint64_t max_lambda_index = 0;
};

// |c_phi| sum over the (s, u, j) progressions.
MajorantReport majorant_sum(const GlobalContext& ctx, const DomainPoint& point, const EigenvalueSource& lambda,
                            const Truncation& trunc);
// The same sum over every q = a/(N L), no progression bookkeeping.
MajorantReport majorant_sum_flat(const GlobalContext& ctx, const DomainPoint& point,
                                 const EigenvalueSource& lambda, const Truncation& trunc);

double smooth_sum(const std::vector<std::uint64_t>& primes, double alpha);

// c (N2 L / y)^eps (L^{1/2} + N2^{1/2+delta} L^delta / y) times the smooth
// sum over the primes with l_p = a_2(p).
double maxram_bound(const GlobalContext& ctx, const DomainPoint& point);

struct CsReport {
  double bound = 0.0;
  double tail_certificate = 0.0;
  double max_m_ratio = 0.0;         // max over blocks of M / (L (su)^{-1/2})
  double max_m_mismatch = 0.0;      // |sum a_n^2 - phi(L) prod l2| relative
  std::size_t blocks = 0;
};

CsReport periodic_cs_bound(const GlobalContext& ctx, const DomainPoint& point, const EigenvalueSource& lambda,
                           const Truncation& trunc);

// sum_n a_n b_n <= M^{1/2} sum_k (sum_j b_{Tk+j}^2)^{1/2}: returns the two
// sides for a finite window of b starting at index 0.
std::pair<double, double> periodic_cs_sides(const std::vector<double>& a_period, const std::vector<double>& b);

using PrimeExponents = std::map<std::uint64_t, Rational>;
double evaluate(const PrimeExponents& e);
PrimeExponents exponent_difference(const PrimeExponents& a, const PrimeExponents& b);
// N^r as prime exponents.
PrimeExponents level_power(const NewformSpecGlobal& spec, const Rational& r);

struct Comparators {
  double upper = 0.0;
  std::optional<double> lower;
  double trivial_upper = 0.0;
  PrimeExponents upper_exponents;
  std::optional<PrimeExponents> lower_exponents;
  PrimeExponents trivial_exponents;
};

Comparators theorem_comparators(const NewformSpecGlobal& spec);

struct NormalizationInterval {
  double low = 0.0;
  double high = 0.0;
  double adjoint_low = 0.0;
  double adjoint_high = 0.0;
  // product of the local norm brackets, one [1, 2] per ramified prime
  double local_low = 1.0;
  double local_high = 1.0;
};

NormalizationInterval adjoint_normalization(const NewformSpecGlobal& spec, const EigenvalueSource& lambda,
                                            std::uint64_t cutoff);

struct ScanRow {
  std::size_t point_id = 0;
  DomainPoint point;
  std::uint64_t L = 1, N2 = 1;
  double majorant = 0.0;
  std::optional<double> maxram;
  double cs_bound = 0.0;
  double upper = 0.0;
  std::optional<double> lower;
  double tail_certificate = 0.0;
};

std::vector<ScanRow> scan(const GlobalContext& ctx, const std::vector<DomainPoint>& points,
                          const EigenvalueSource& lambda, const Truncation& trunc, unsigned parallel);

double pairwise_sum(std::vector<double>& values);

// Run fn(i) for i in [0, count) on k threads; results keep index order.
// The first exception (lowest index) is rethrown after joining.
template <class T>
std::vector<T> parallel_map(std::size_t count, unsigned k, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> out(count);
  std::vector<std::exception_ptr> errors(count);
  unsigned threads = std::max(1u, std::min<unsigned>(k, static_cast<unsigned>(count)));
  auto worker = [&](unsigned w) {
    for (std::size_t i = w; i < count; i += threads) {
      try {
        out[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> result;
  result.reserve(count);
  for (auto& o : out) result.push_back(std::move(*o));
  return result;
}

}  // namespace gl2sup
