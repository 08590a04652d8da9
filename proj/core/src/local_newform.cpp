#include "gl2sup/local_newform.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace gl2sup {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Max: return "MAX";
    case Regime::High: return "HIGH";
    case Regime::DiagOnly: return "DIAG-ONLY";
    case Regime::SphericalExcluded: return "SPHERICAL-EXCLUDED";
  }
  return "?";
}

std::string to_string(MagnitudeFlag f) {
  switch (f) {
    case MagnitudeFlag::Exact: return "EXACT";
    case MagnitudeFlag::Bound: return "BOUND";
    case MagnitudeFlag::Zero: return "ZERO";
  }
  return "?";
}

PrincipalSeriesLocal::PrincipalSeriesLocal(ExtendedCharacter chi1, ExtendedCharacter chi2)
    : chi1_(std::move(chi1)), chi2_(std::move(chi2)), omega_(chi1_ * chi2_), a1_(0), a2_(0) {
  if (chi1_.prime() != chi2_.prime()) throw std::invalid_argument("PrincipalSeriesLocal: mixed primes");
  if (chi1_.conductor_exponent() < chi2_.conductor_exponent()) std::swap(chi1_, chi2_);
  a1_ = static_cast<int>(chi1_.conductor_exponent());
  a2_ = static_cast<int>(chi2_.conductor_exponent());
}

Regime PrincipalSeriesLocal::regime() const {
  int N = n();
  if (a2_ == 0 && a1_ > 1) return Regime::Max;
  if (a2_ == 0 && a1_ == 1) return Regime::DiagOnly;
  if (prime() != 2 && a2_ >= 1 && 2 * a2_ < N && N < 2 * a1_ && N > 1) return Regime::High;
  return Regime::SphericalExcluded;
}

PrincipalSeriesLocal PrincipalSeriesLocal::contragredient() const {
  return PrincipalSeriesLocal(chi1_.inverse(), chi2_.inverse());
}

std::string PrincipalSeriesLocal::to_string() const {
  std::ostringstream os;
  os << "pi(p=" << prime() << ", a1=" << a1_ << ", a2=" << a2_ << ", " << gl2sup::to_string(regime()) << ")";
  return os.str();
}

ExtendedCharacter primitive_character(std::uint64_t p, int a) {
  if (a < 0) throw std::invalid_argument("primitive_character: negative conductor");
  if (a == 0) return ExtendedCharacter::trivial(p);
  if (p == 2) {
    if (a == 1) throw std::invalid_argument("primitive_character: no character of conductor 2 for p = 2");
    if (a == 2) return ExtendedCharacter(2, 2, {1, 0});
    return ExtendedCharacter(2, static_cast<unsigned>(a), {0, 1});
  }
  return ExtendedCharacter(p, static_cast<unsigned>(a), {1});
}

PrincipalSeriesLocal make_principal_series(std::uint64_t p, int a1, int a2) {
  return PrincipalSeriesLocal(primitive_character(p, a1), primitive_character(p, a2));
}

Complex diagonal_value(const PrincipalSeriesLocal& rep, int m) {
  double q = static_cast<double>(rep.prime());
  if (rep.a1() > 0 && rep.a2() == 0) return m < 0 ? 0.0 : std::pow(q, -0.5 * m);
  if (rep.a1() > 0 && rep.a2() > 0) return m == 0 ? 1.0 : 0.0;
  throw UnsupportedRegimeError("diagonal_value: unramified representation");
}

namespace {

double qpow(std::uint64_t p, double e) { return std::pow(static_cast<double>(p), e); }

bool congruent(std::uint64_t a, std::uint64_t b, std::uint64_t p, unsigned k) {
  std::uint64_t mod = ipow(p, k);
  return a % mod == b % mod;
}

// nu in r + p^j o^*: congruent mod p^j but not mod p^{j+1}.
bool in_shell(std::uint64_t nu, const NuAnchor& r, std::uint64_t p, unsigned j) {
  if (r.precision < j + 1)
    throw std::invalid_argument("closed form needs nu_1 modulo p^" + std::to_string(j + 1));
  return congruent(nu, r.residue, p, j) && !congruent(nu, r.residue, p, j + 1);
}

MagnitudeEntry zero() { return {0.0, MagnitudeFlag::Zero}; }
MagnitudeEntry exact(double v) { return {v, MagnitudeFlag::Exact}; }

std::vector<std::uint64_t> units_mod(std::uint64_t p, unsigned k) {
  std::vector<std::uint64_t> out;
  if (k == 0) return {1};
  std::uint64_t mod = ipow(p, k);
  for (std::uint64_t u = 1; u < mod; ++u)
    if (u % p != 0) out.push_back(u);
  return out;
}

std::vector<Complex> unramified_factor(const ExtendedCharacter& a, const ExtendedCharacter& b, double c) {
  std::vector<Complex> poly{1.0};
  for (const auto* chi : {&a, &b}) {
    if (chi->is_ramified()) continue;
    std::vector<Complex> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] -= c * poly[i];
    }
    poly = std::move(next);
  }
  return poly;
}

}  // namespace

MagnitudeEntry magnitude_max(const PrincipalSeriesLocal& rep, int m, int ell, std::uint64_t nu, const NuAnchor& nu1) {
  if (rep.regime() != Regime::Max) throw UnsupportedRegimeError("magnitude_max: regime is " + to_string(rep.regime()));
  int n = rep.n();
  std::uint64_t p = rep.prime();
  if (ell < 0 || ell >= n) throw std::invalid_argument("magnitude_max: l outside [0, n)");
  if (ell == 0) return m >= -n ? exact(qpow(p, -0.5 * (m + n))) : zero();
  if (m + ell != -n) return zero();
  if (2 * ell > n) throw std::invalid_argument("magnitude_max: l > n/2 on the nu_1 row");
  if (nu1.precision < static_cast<unsigned>(ell))
    throw std::invalid_argument("magnitude_max: nu_1 known only modulo p^" + std::to_string(nu1.precision));
  return congruent(nu, nu1.residue, p, static_cast<unsigned>(ell)) ? exact(qpow(p, 0.5 * ell)) : zero();
}

MagnitudeEntry magnitude_high(const PrincipalSeriesLocal& rep, int m, int ell, std::uint64_t nu,
                              const NuAnchor& nu1_inverse, HighTableVariant variant) {
  if (rep.regime() != Regime::High)
    throw UnsupportedRegimeError("magnitude_high: regime is " + to_string(rep.regime()));
  int n = rep.n(), a1 = rep.a1(), a2 = rep.a2();
  std::uint64_t p = rep.prime();
  if (ell < 0 || 2 * ell > n) throw std::invalid_argument("magnitude_high: l outside [0, n/2]");
  double value = qpow(p, -0.5 * (m + n));

  auto low_rows = [&](int cap) -> std::optional<MagnitudeEntry> {
    if (ell < a2) return m == -n ? exact(value) : zero();
    if (ell == a2) {
      bool above = variant == HighTableVariant::Corrected ? m > -n : (m > -n && m < cap);
      if (above) return exact(value);
      if (m == -n) return in_shell(nu, nu1_inverse, p, 0) ? exact(value) : zero();
      return zero();
    }
    return std::nullopt;
  };

  if (2 * ell < a1) {
    if (auto r = low_rows(-a1)) return *r;
    // l > a2
    if (m == -a1 - ell && in_shell(nu, nu1_inverse, p, static_cast<unsigned>(ell - a2))) return exact(value);
    return zero();
  }
  if (ell <= a2) {
    if (auto r = low_rows(-a2)) return *r;
    return zero();
  }
  if (2 * ell < a1 + a2) {
    if (m == -ell - a1 && in_shell(nu, nu1_inverse, p, static_cast<unsigned>(ell - a2))) return exact(value);
    return zero();
  }
  if (2 * ell == a1 + a2) {
    if (m == -ell - a1 && in_shell(nu, nu1_inverse, p, static_cast<unsigned>((a1 - a2) / 2))) {
      double bound = a2 > 1 ? 2.0 * qpow(p, 0.5 * ell - a2 / 3.0) : qpow(p, 0.5 * ell - 0.5 * a2);
      return {bound, MagnitudeFlag::Bound};
    }
    return zero();
  }
  return zero();
}

MagnitudeEntry closed_form_magnitude(const PrincipalSeriesLocal& rep, int m, int ell, std::uint64_t nu,
                                     const NuAnchor& anchor, HighTableVariant variant) {
  switch (rep.regime()) {
    case Regime::Max: return magnitude_max(rep, m, ell, nu, anchor);
    case Regime::High: return magnitude_high(rep, m, ell, nu, anchor, variant);
    default: throw UnsupportedRegimeError("closed_form_magnitude: regime is " + to_string(rep.regime()));
  }
}

CoefficientVector::CoefficientVector(int ell, ExtendedCharacter mu, int low, std::vector<Complex> values,
                                     std::vector<Complex> lhs_factor, double residual)
    : ell_(ell),
      mu_(std::move(mu)),
      low_(low),
      values_(std::move(values)),
      lhs_factor_(std::move(lhs_factor)),
      residual_(residual) {}

Complex CoefficientVector::at(int m) const {
  if (m < low_) return 0.0;
  if (m <= high()) return values_[static_cast<std::size_t>(m - low_)];
  // Past the window the right-hand side has no terms left.
  std::size_t deg = lhs_factor_.size() - 1;
  if (deg == 0) return 0.0;
  std::vector<Complex> tail(values_.end() - static_cast<std::ptrdiff_t>(std::min(deg, values_.size())), values_.end());
  Complex next = 0.0;
  for (int k = high() + 1; k <= m; ++k) {
    next = 0.0;
    for (std::size_t i = 1; i <= deg; ++i) next -= lhs_factor_[i] * tail[tail.size() - i];
    tail.erase(tail.begin());
    tail.push_back(next);
  }
  return next;
}

CoefficientVector solve_basic_identity(const PrincipalSeriesLocal& rep, int ell, const ExtendedCharacter& mu) {
  Regime reg = rep.regime();
  if (reg == Regime::SphericalExcluded)
    throw UnsupportedRegimeError("solve_basic_identity: regime is " + to_string(reg));
  int n = rep.n();
  if (ell < 0 || ell > n) throw std::invalid_argument("solve_basic_identity: l outside [0, n]");
  if (static_cast<int>(mu.conductor_exponent()) > ell)
    throw std::invalid_argument("solve_basic_identity: mu has conductor above l");
  std::uint64_t p = rep.prime();
  double c = qpow(p, -0.5);

  ExtendedCharacter mc1 = mu * rep.chi1();
  ExtendedCharacter mc2 = mu * rep.chi2();
  int amp = static_cast<int>(mc1.conductor_exponent() + mc2.conductor_exponent());
  Complex eps = epsilon_factor(mc1).value * epsilon_factor(mc2).value;
  double omega_sign = rep.omega().sign_at_minus_one();
  ExtendedCharacter mu_inv = mu.inverse();

  const int D = ell + n + 8;
  std::vector<Complex> G(static_cast<std::size_t>(D + 1), 0.0);
  for (int k = 0; k <= D; ++k) {
    Complex w = diagonal_value(rep, k);
    if (w == 0.0) continue;
    G[k] = w * gauss_sum_bruteforce(prime_power(p, k - ell), mu_inv);
  }
  // L(1-s, mu^{-1} omega^{-1} pi)^{-1} in T^{-1}; same unramified set as mu pi.
  std::vector<Complex> PR = unramified_factor(mc1, mc2, c);
  std::vector<Complex> R(static_cast<std::size_t>(D + 1), 0.0);  // R[k] multiplies T^{-k}
  for (std::size_t i = 0; i < PR.size(); ++i)
    for (int k = static_cast<int>(i); k <= D; ++k) R[k] += omega_sign * PR[i] * G[k - i];
  double residual = 0.0;
  for (int k = D - 3; k <= D; ++k) residual = std::max(residual, std::abs(R[k]));

  std::vector<Complex> PL = PR;  // L(s, mu pi)^{-1} in T
  const int low = -ell - n;
  const int top = D + amp;
  std::vector<Complex> F(static_cast<std::size_t>(top + D + 1), 0.0);  // F[d + D] is degree d
  for (int d = -D; d <= top; ++d) {
    Complex v = d <= 0 ? R[-d] / eps : Complex(0.0);
    for (std::size_t i = 1; i < PL.size(); ++i)
      if (d - static_cast<int>(i) >= -D) v -= PL[i] * F[d - i + D];
    F[d + D] = v;
  }
  for (int d = -D; d < low + amp; ++d) residual = std::max(residual, std::abs(F[d + D]));
  if (residual > kWindowResidualTolerance) {
    std::ostringstream os;
    os << "solve_basic_identity: window residual " << residual << " for " << rep.to_string() << ", l=" << ell
       << ", " << mu.to_string();
    throw TruncationError(os.str());
  }
  std::vector<Complex> values;
  values.reserve(static_cast<std::size_t>(D - low + 1));
  for (int m = low; m <= D; ++m) values.push_back(F[m + amp + D]);
  return CoefficientVector(ell, mu, low, std::move(values), std::move(PL), residual);
}

Complex fourier_synthesize(const std::vector<CoefficientVector>& coeffs, int m, std::uint64_t nu) {
  if (coeffs.empty()) throw std::invalid_argument("fourier_synthesize: no coefficients");
  int ell = coeffs.front().ell();
  std::uint64_t p = coeffs.front().mu().prime();
  if (coeffs.size() != euler_phi_prime_power(p, static_cast<unsigned>(ell)))
    throw std::invalid_argument("fourier_synthesize: missing characters of X(" + std::to_string(ell) + ")");
  std::uint64_t mod = ipow(p, static_cast<unsigned>(ell));
  Complex sum = 0.0;
  for (const auto& cv : coeffs) {
    Complex c = cv.at(m);
    if (c == 0.0) continue;
    sum += c * (mod == 1 ? Complex(1.0) : cv.mu().lift(static_cast<unsigned>(ell)).on_residue(nu % mod));
  }
  return sum;
}

WhittakerOracle::WhittakerOracle(PrincipalSeriesLocal rep, int ell_max) : rep_(std::move(rep)) {
  int n = rep_.n();
  ell_max_ = ell_max < 0 ? n : std::min(ell_max, n);
  coeffs_.resize(static_cast<std::size_t>(ell_max_ + 1));
  for (int ell = 0; ell <= ell_max_; ++ell) {
    for (const auto& mu : enumerate_characters(rep_.prime(), static_cast<unsigned>(ell)))
      coeffs_[ell].push_back(solve_basic_identity(rep_, ell, mu));
  }
}

const std::vector<CoefficientVector>& WhittakerOracle::coefficients(int ell) const {
  if (ell < 0 || ell > ell_max_) throw std::out_of_range("WhittakerOracle: l outside computed range");
  return coeffs_[ell];
}

Complex WhittakerOracle::value(int m, int ell, std::uint64_t nu) const {
  return fourier_synthesize(coefficients(ell), m, nu);
}

Complex WhittakerOracle::value_at(const LocalMatrix& g) const {
  CosetReduction r = reduce_to_triple(g, rep_.n());
  Complex w = value(r.triple.m, r.triple.ell, r.triple.nu);
  if (w == 0.0) return 0.0;
  return rep_.omega()(r.witness.zeta) * additive_character(r.witness.x, rep_.prime()) * w;
}

std::shared_ptr<const WhittakerOracle> make_oracle(const PrincipalSeriesLocal& rep, int ell_max) {
  return std::make_shared<const WhittakerOracle>(rep, ell_max);
}

std::vector<NuAnchor> nu_anchor_by_row(const WhittakerOracle& oracle) {
  const auto& rep = oracle.rep();
  int n = rep.n(), a1 = rep.a1(), a2 = rep.a2();
  std::uint64_t p = rep.prime();
  std::vector<NuAnchor> rows(static_cast<std::size_t>(n / 2 + 1));
  int top = std::min(n / 2, oracle.ell_max());
  auto support = [&](int m, int ell) {
    std::vector<std::uint64_t> s;
    for (auto nu : units_mod(p, static_cast<unsigned>(ell)))
      if (oracle.magnitude(m, ell, nu) > kZeroThreshold) s.push_back(nu);
    return s;
  };
  if (rep.regime() == Regime::Max) {
    for (int ell = 1; ell <= top; ++ell) {
      auto s = support(-n - ell, ell);
      if (s.size() == 1) rows[ell] = NuAnchor{s[0], static_cast<unsigned>(ell)};
    }
  } else if (rep.regime() == Regime::High) {
    if (a2 <= top) {
      // zero set of the l = a2 row at m = -n is one class mod p
      std::set<std::uint64_t> zero_classes;
      for (auto nu : units_mod(p, static_cast<unsigned>(a2)))
        if (oracle.magnitude(-n, a2, nu) <= kZeroThreshold) zero_classes.insert(nu % p);
      if (zero_classes.size() == 1) rows[a2] = NuAnchor{*zero_classes.begin(), 1};
    }
    for (int ell = a2 + 1; ell <= top; ++ell) {
      unsigned j = static_cast<unsigned>(ell - a2);
      auto s = support(-ell - a1, ell);
      if (s.empty()) continue;
      std::set<std::uint64_t> coarse, fine;
      std::uint64_t mj = ipow(p, j), mj1 = ipow(p, j + 1);
      for (auto nu : s) {
        coarse.insert(nu % mj);
        fine.insert(nu % mj1);
      }
      if (coarse.size() != 1) continue;
      std::vector<std::uint64_t> missing;
      for (std::uint64_t t = 0; t < p; ++t) {
        std::uint64_t lift = (*coarse.begin() + t * mj) % mj1;
        if (lift % p == 0) continue;
        if (!fine.count(lift)) missing.push_back(lift);
      }
      if (missing.size() == 1) rows[ell] = NuAnchor{missing[0], j + 1};
    }
  }
  return rows;
}

NuAnchor discover_nu_anchor(const WhittakerOracle& oracle) {
  NuAnchor best;
  for (const auto& a : nu_anchor_by_row(oracle))
    if (a.precision > best.precision) best = a;
  return best;
}

OracleComparison compare_with_closed_form(const WhittakerOracle& oracle, int m_lo, int m_hi, double tol,
                                          HighTableVariant variant) {
  OracleComparison out;
  const auto& rep = oracle.rep();
  NuAnchor anchor = discover_nu_anchor(oracle);
  std::uint64_t p = rep.prime();
  int top = std::min(rep.n() / 2, oracle.ell_max());
  for (int ell = 0; ell <= top; ++ell) {
    for (int m = m_lo; m <= m_hi; ++m) {
      for (auto nu : units_mod(p, static_cast<unsigned>(ell))) {
        ++out.points;
        double w = oracle.magnitude(m, ell, nu);
        MagnitudeEntry e = closed_form_magnitude(rep, m, ell, nu, anchor, variant);
        bool bad = false;
        switch (e.flag) {
          case MagnitudeFlag::Zero: bad = w > kZeroThreshold; break;
          case MagnitudeFlag::Exact:
            ++out.exact_checked;
            out.max_abs_error = std::max(out.max_abs_error, std::abs(w - e.value));
            bad = std::abs(w - e.value) > tol;
            break;
          case MagnitudeFlag::Bound:
            ++out.bound_checked;
            bad = w > e.value + tol;
            break;
        }
        if (bad) {
          ++out.mismatches;
          if (out.details.size() < 50) {
            std::ostringstream os;
            os << "m=" << m << " l=" << ell << " nu=" << nu << " oracle=" << w << " table=" << e.value << " ("
               << to_string(e.flag) << ")";
            out.details.push_back(os.str());
          }
        }
      }
    }
  }
  return out;
}

Complex conjugate_value(const WhittakerOracle& oracle, const CosetTriple& t) {
  std::uint64_t p = oracle.rep().prime();
  return oracle.value_at(representative(p, t) * LocalMatrix::antidiag_pn(p, oracle.rep().n()));
}

AlphaReport alpha_modulus(const WhittakerOracle& pi, const WhittakerOracle& pi_tilde, int m_lo, int m_hi) {
  AlphaReport out;
  std::uint64_t p = pi.rep().prime();
  int n = pi.rep().n();
  std::vector<double> ratios;
  for (int m = m_lo; m <= m_hi; ++m) {
    for (const auto& t : canonical_index_set(p, n, m)) {
      ++out.points;
      double a = std::abs(conjugate_value(pi, t));
      double b = std::abs(pi_tilde.value(t.m, t.ell, t.nu));
      if (b > kZeroThreshold) {
        ratios.push_back(a / b);
      } else if (a > kZeroThreshold) {
        out.max_deviation = std::numeric_limits<double>::infinity();
      }
    }
  }
  out.nonvanishing = ratios.size();
  if (ratios.empty()) throw std::runtime_error("alpha_modulus: every sampled point vanishes");
  out.alpha = ratios.front();
  for (double r : ratios) out.max_deviation = std::max(out.max_deviation, std::abs(r - out.alpha));
  return out;
}

double l2_average(const WhittakerOracle& oracle, int m, int ell) {
  std::uint64_t p = oracle.rep().prime();
  auto units = units_mod(p, static_cast<unsigned>(ell));
  double s = 0.0;
  for (auto nu : units) s += std::norm(oracle.value(m, ell, nu));
  return s / static_cast<double>(units.size());
}

WhittakerMagnitudeTable build_magnitude_table(const PrincipalSeriesLocal& rep, const NuAnchor& anchor, int m_lo,
                                              int m_hi) {
  WhittakerMagnitudeTable t{rep, anchor, {}};
  std::uint64_t p = rep.prime();
  for (int ell = 0; 2 * ell <= rep.n(); ++ell)
    for (int m = m_lo; m <= m_hi; ++m)
      for (auto nu : units_mod(p, static_cast<unsigned>(ell))) {
        MagnitudeEntry e = closed_form_magnitude(rep, m, ell, nu, anchor);
        t.rows.push_back({m, ell, nu, e.value, e.flag});
      }
  return t;
}

void write_magnitude_csv(std::ostream& os, const WhittakerMagnitudeTable& table) {
  os << "m,l,nu,magnitude,flag\n";
  for (const auto& r : table.rows)
    os << r.m << ',' << r.ell << ',' << r.nu << ',' << std::setprecision(12) << r.value << ',' << to_string(r.flag)
       << '\n';
}

}  // namespace gl2sup
