#include "gl2sup/global_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gl2sup/cosets.hpp"

namespace gl2sup {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSqrt3Half = 0.8660254037844386;
constexpr int kTableSlack = 8;

std::uint64_t units_count(std::uint64_t p, unsigned k) { return k == 0 ? 1 : euler_phi_prime_power(p, k); }

std::vector<std::uint64_t> unit_residues(std::uint64_t p, unsigned k) {
  if (k == 0) return {1};
  std::uint64_t mod = ipow(p, k);
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 1; r < mod; ++r)
    if (r % p != 0) out.push_back(r);
  return out;
}

int small_valuation(std::uint64_t a, std::uint64_t p) {
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// (C, r) with |kappa(y)| <= C |y|^r e^{-2 pi |y|} for 2 pi |y| >= y0.
std::pair<double, double> envelope_shape(const ArchimedeanType& t, double y0) {
  if (t.kind == ArchimedeanType::Kind::Discrete) return {2.0, 0.5 * ((t.s1 - t.s2).real() + 1.0)};
  if (t.m1 == t.m2) return {0.5, 0.0};
  return {1.0 + 1.0 / (2.0 * y0), 0.5};
}

// sum_{t >= A, t integer} K t^p e^{-beta t}, bounded by the first term plus
// the integral, valid once beta A > max(p, 0).
double exp_tail(double K, double p, double beta, double A) {
  if (A < 1.0) A = 1.0;
  double pp = std::max(p, 0.0);
  if (!(beta * A > pp) || beta <= 0.0) return std::numeric_limits<double>::infinity();
  double first = K * std::exp(p * std::log(A) - beta * A);
  double integral = K * std::exp(pp * std::log(A) - beta * A) / (beta - pp / A);
  return first + integral;
}

}  // namespace

std::string DomainPoint::conjugation_set() const {
  std::string out;
  for (const auto& c : locals) {
    if (!c.conjugated) continue;
    if (!out.empty()) out += '.';
    out += std::to_string(c.p);
  }
  return out.empty() ? "-" : out;
}

std::string DomainPoint::to_string() const {
  std::ostringstream os;
  os << "(x=" << x << ", y=" << y;
  for (const auto& c : locals)
    os << ", p=" << c.p << ":(m=" << c.m << ",l=" << c.ell << ",nu=" << c.nu << (c.conjugated ? ",S" : "") << ")";
  os << ")";
  return os.str();
}

void validate_domain_point(const NewformSpecGlobal& spec, const DomainPoint& point) {
  if (!(point.y >= kSqrt3Half - 1e-12)) throw std::invalid_argument("domain point: y must be >= sqrt(3)/2");
  if (point.locals.size() != spec.primes.size()) throw std::invalid_argument("domain point: wrong number of primes");
  for (std::size_t i = 0; i < spec.primes.size(); ++i) {
    const auto& c = point.locals[i];
    const auto& d = spec.primes[i];
    if (c.p != d.p || c.n != d.n) throw std::invalid_argument("domain point: prime mismatch");
    if (c.ell < 0 || 2 * c.ell > c.n)
      throw std::invalid_argument("domain point: l_p = " + std::to_string(c.ell) + " exceeds n_p/2 at p = " +
                                  std::to_string(c.p));
    if (c.m != -(c.n / 2) && c.m != -((c.n + 1) / 2))
      throw std::invalid_argument("domain point: m_p must be -floor(n/2) or -ceil(n/2)");
    unsigned k = static_cast<unsigned>(ell_n(c.ell, c.n));
    if (c.nu != canonical_nu(c.p, static_cast<std::int64_t>(c.nu), k))
      throw std::invalid_argument("domain point: nu is not a canonical unit residue");
  }
}

std::vector<DomainPoint> enumerate_domain_points(const NewformSpecGlobal& spec) {
  std::vector<std::vector<LocalCoordinate>> options;
  for (const auto& d : spec.primes) {
    std::vector<LocalCoordinate> opts;
    std::vector<int> ms{-(d.n / 2)};
    if (d.n % 2 == 1) ms.push_back(-((d.n + 1) / 2));
    std::vector<bool> conj{false};
    if (d.high()) conj.push_back(true);
    for (int ell = 0; 2 * ell <= d.n; ++ell)
      for (auto nu : unit_residues(d.p, static_cast<unsigned>(ell)))
        for (int m : ms)
          for (bool s : conj) opts.push_back({d.p, d.n, m, ell, nu, s});
    options.push_back(std::move(opts));
  }
  std::vector<std::vector<LocalCoordinate>> combos{{}};
  for (const auto& opts : options) {
    std::vector<std::vector<LocalCoordinate>> next;
    for (const auto& c : combos)
      for (const auto& o : opts) {
        auto e = c;
        e.push_back(o);
        next.push_back(std::move(e));
      }
    combos = std::move(next);
  }
  std::vector<DomainPoint> out;
  for (const auto& c : combos)
    for (double y : spec.config.y_grid)
      for (double x : spec.config.x_grid) out.push_back({x, y, c});
  return out;
}

std::vector<DomainPoint> sample_domain_points(const NewformSpecGlobal& spec, std::size_t max_points,
                                              std::uint64_t seed) {
  auto all = enumerate_domain_points(spec);
  if (all.size() <= max_points) return all;
  std::vector<std::size_t> idx(all.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < max_points; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(max_points);
  std::sort(idx.begin(), idx.end());
  std::vector<DomainPoint> out;
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

std::uint64_t RamificationProfile::modulus() const {
  std::uint64_t num = plus.L * plus.C;
  if (num % plus.N != 0) throw std::logic_error("L+ C+ / N+ is not an integer");
  return num / plus.N;
}

RamificationProfile ramification_profile(const NewformSpecGlobal& spec, const DomainPoint& point) {
  validate_domain_point(spec, point);
  RamificationProfile r;
  for (std::size_t i = 0; i < spec.primes.size(); ++i) {
    const auto& d = spec.primes[i];
    const auto& c = point.locals[i];
    int eps = -c.m, eps2 = d.n - eps;
    std::uint64_t pl = ipow(d.p, c.ell), pe = ipow(d.p, eps), pe2 = ipow(d.p, eps2);
    r.L *= pl;
    r.N1 *= pe;
    r.N2 *= pe2;
    if (!d.high()) {
      r.low.push_back(d.p);
      continue;
    }
    r.high.push_back(d.p);
    StarredIntegers* star;
    if (c.ell < d.a2()) {
      r.high_minus.push_back(d.p);
      star = &r.minus;
    } else if (c.ell == d.a2()) {
      r.high_equal.push_back(d.p);
      star = &r.equal;
    } else {
      r.high_plus.push_back(d.p);
      star = &r.plus;
    }
    star->L *= pl;
    star->C *= ipow(d.p, d.c);
    star->N *= ipow(d.p, d.n);
    star->N1 *= pe;
    star->N2 *= pe2;
  }
  (void)r.modulus();
  return r;
}

LocalFactor::LocalFactor(const PrimeData& data, int ell_max) : data_(data), ell_max_(ell_max), m_hi_(data.n + kTableSlack) {
  if (!data_.high()) {
    sup_ = std::sqrt(data_.l2_constant);
    return;
  }
  pi_ = make_oracle(*data_.rep, ell_max_);
  pi_tilde_ = make_oracle(data_.rep->contragredient(), ell_max_);
  sup_ = 0.0;
  std::uint64_t p = data_.p;
  for (int conj = 0; conj < 2; ++conj) {
    const WhittakerOracle& o = conj ? *pi_tilde_ : *pi_;
    auto& tab = table_[conj];
    tab.resize(static_cast<std::size_t>(ell_max_) + 1);
    for (int ell = 0; ell <= ell_max_; ++ell) {
      unsigned k = static_cast<unsigned>(ell_n(ell, data_.n));
      std::uint64_t mod = ipow(p, k);
      int m_lo = -data_.n - ell;
      for (int m = m_lo; m <= m_hi_; ++m) {
        std::vector<double> row(mod, 0.0);
        for (auto nu : unit_residues(p, k)) {
          double v = o.magnitude(m, ell, nu);
          row[nu % mod] = v < kZeroThreshold ? 0.0 : v;
          sup_ = std::max(sup_, row[nu % mod]);
        }
        tab[static_cast<std::size_t>(ell)].insert(tab[static_cast<std::size_t>(ell)].end(), row.begin(), row.end());
      }
    }
  }
}

const WhittakerOracle* LocalFactor::oracle(bool conjugated) const {
  return conjugated ? pi_tilde_.get() : pi_.get();
}

double LocalFactor::raw(bool conjugated, int m, int ell, std::uint64_t nu) const {
  const WhittakerOracle& o = conjugated ? *pi_tilde_ : *pi_;
  double v = o.magnitude(m, ell, nu);
  return v < kZeroThreshold ? 0.0 : v;
}

double LocalFactor::magnitude(bool conjugated, int m, int ell, std::uint64_t nu) const {
  if (ell < 0 || ell > ell_max_)
    throw std::out_of_range("LocalFactor: l = " + std::to_string(ell) + " outside the tabulated range");
  int n = data_.n;
  if (!data_.high()) return m >= -n ? std::sqrt(data_.l2_constant) * std::pow(static_cast<double>(data_.p), -0.25 * (m + n)) : 0.0;
  int m_lo = -n - ell;
  if (m < m_lo) return 0.0;
  if (m > m_hi_) return raw(conjugated, m, ell, nu);
  unsigned k = static_cast<unsigned>(ell_n(ell, n));
  std::uint64_t mod = ipow(data_.p, k);
  const auto& tab = table_[conjugated ? 1 : 0][static_cast<std::size_t>(ell)];
  return tab[static_cast<std::size_t>(m - m_lo) * mod + nu % mod];
}

double LocalFactor::l2_average(bool conjugated, int m, int ell) const {
  if (!data_.high()) return m >= -data_.n ? data_.l2_constant * std::pow(static_cast<double>(data_.p), -0.5 * (m + data_.n)) : 0.0;
  unsigned k = static_cast<unsigned>(ell_n(ell, data_.n));
  double s = 0.0;
  for (auto nu : unit_residues(data_.p, k)) {
    double v = magnitude(conjugated, m, ell, nu);
    s += v * v;
  }
  return s / static_cast<double>(units_count(data_.p, k));
}

GlobalContext::GlobalContext(NewformSpecGlobal spec, bool full_ell) : spec_(std::move(spec)) {
  for (const auto& d : spec_.primes) factors_.emplace_back(d, full_ell ? d.n : d.n / 2);
}

double GlobalContext::local_product(const DomainPoint& point, const Rational& q) const {
  if (q == 0) throw std::invalid_argument("local_product: q must be nonzero");
  double prod = 1.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& c = point.locals[i];
    std::uint64_t p = c.p;
    int v = valuation(q, p).value();
    unsigned k = static_cast<unsigned>(ell_n(c.ell, c.n));
    std::uint64_t nu = 1;
    if (k > 0) {
      std::uint64_t mod = ipow(p, k);
      std::uint64_t u = unit_residue(q, p, k);
      nu = mod_mul(c.nu, mod_inverse(u, mod), mod);
    }
    prod *= factors_[i].magnitude(c.conjugated, c.m + v, c.ell, nu);
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

double GlobalContext::sup_local_product() const {
  double s = 1.0;
  for (const auto& f : factors_) s *= f.sup_magnitude();
  return s;
}

namespace {

// local product at q = a / D with D composed of primes dividing N
struct ScaledEvaluator {
  const GlobalContext& ctx;
  const DomainPoint& point;
  std::uint64_t D;
  std::vector<int> d_val;
  std::vector<std::uint64_t> mods;
  std::vector<std::uint64_t> d_unit_inv;

  ScaledEvaluator(const GlobalContext& c, const DomainPoint& pt, std::uint64_t d) : ctx(c), point(pt), D(d) {
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const auto& lc = point.locals[i];
      std::uint64_t p = lc.p;
      int v = small_valuation(D, p);
      d_val.push_back(v);
      unsigned k = static_cast<unsigned>(ell_n(lc.ell, lc.n));
      std::uint64_t mod = ipow(p, k);
      mods.push_back(mod);
      std::uint64_t du = D / ipow(p, static_cast<unsigned>(v));
      d_unit_inv.push_back(mod == 1 ? 0 : mod_inverse(du % mod, mod));
    }
  }

  double local(std::int64_t a) const {
    std::uint64_t abs_a = static_cast<std::uint64_t>(a < 0 ? -a : a);
    double prod = 1.0;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const auto& lc = point.locals[i];
      std::uint64_t p = lc.p;
      int va = 0;
      std::uint64_t ua = abs_a;
      while (ua % p == 0) {
        ua /= p;
        ++va;
      }
      std::uint64_t mod = mods[i];
      std::uint64_t nu = 1;
      if (mod > 1) {
        std::uint64_t r = ua % mod;
        if (a < 0) r = (mod - r) % mod;
        std::uint64_t u = mod_mul(r, d_unit_inv[i], mod);
        nu = mod_mul(lc.nu, mod_inverse(u, mod), mod);
      }
      prod *= ctx.factor(i).magnitude(lc.conjugated, lc.m + va - d_val[i], lc.ell, nu);
      if (prod == 0.0) return 0.0;
    }
    return prod;
  }

  // the part of |a| prime to N
  std::uint64_t coprime_part(std::int64_t a) const {
    std::uint64_t x = static_cast<std::uint64_t>(a < 0 ? -a : a);
    for (const auto& lc : point.locals)
      while (x % lc.p == 0) x /= lc.p;
    return x;
  }
};

struct TermSum {
  std::vector<double> terms;
  std::uint64_t max_index = 0;
};

void add_term(TermSum& acc, const ScaledEvaluator& ev, const NewformSpecGlobal& spec, const EigenvalueSource& lambda,
              std::int64_t a, double y) {
  double loc = ev.local(a);
  if (loc == 0.0) return;
  std::uint64_t n = ev.coprime_part(a);
  double lam = lambda.abs_lambda(n);
  acc.max_index = std::max(acc.max_index, n);
  double q = static_cast<double>(a) / static_cast<double>(ev.D);
  double k = std::abs(kappa(spec.arch, q * y));
  acc.terms.push_back(loc * lam / std::sqrt(static_cast<double>(n)) * k);
}

// sum over |a| >= A of the envelope majorant of a term, q = a / D
double majorant_tail(const GlobalContext& ctx, double y, std::uint64_t D, double A) {
  const auto& spec = ctx.spec();
  double h = y / static_cast<double>(D);
  double beta = kTwoPi * h;
  if (beta * A < 1.0) return std::numeric_limits<double>::infinity();
  auto [C, r] = envelope_shape(spec.arch, 1.0);
  double delta = spec.delta.get_d();
  double W = ctx.sup_local_product();
  // two signs, |lambda(n)| n^{-1/2} <= 2 n^delta with n <= |a|
  double K = 2.0 * W * 2.0 * C * std::pow(h, r);
  return exp_tail(K, delta + r, beta, A);
}

std::uint64_t window_bound(const NewformSpecGlobal& spec, const Truncation& trunc, double y, std::uint64_t D) {
  double Q = trunc.kappa_cutoff / (kTwoPi * y);
  return static_cast<std::uint64_t>(std::floor(Q * static_cast<double>(D)));
  (void)spec;
}

std::int64_t integral_numerator(const Rational& x) {
  if (x.get_den() != 1) throw std::logic_error("expected an integer, got " + to_string(x));
  if (!x.get_num().fits_slong_p()) throw std::overflow_error("integer too large");
  return x.get_num().get_si();
}

}  // namespace

Truncation default_truncation(const NewformSpecGlobal& spec) {
  return {spec.config.kappa_cutoff, spec.config.smax};
}

namespace {

// LocalCoordinate for the triple of g_p, optionally mirrored.
LocalCoordinate coordinate_from_matrix(const LocalMatrix& g, const PrimeData& d, bool mirror_high_ell) {
  std::uint64_t p = d.p;
  int n = d.n, e = n / 2;
  if (!mirror_high_ell) {
    auto red = reduce_to_triple(g, n);
    return {p, n, red.triple.m, red.triple.ell, red.triple.nu, false};
  }
  LocalMatrix h = g * LocalMatrix::a(p, prime_power(p, -e));
  if (!h.in_gl2_zp())
    throw std::invalid_argument("generating_domain_reduction: g_p is not in GL2(Z_p) a(p^e) at p = " +
                                std::to_string(p));
  TranslateClass tc = classify_translate(g, n, e);
  const CosetTriple& t = tc.triple;
  if (t.ell <= e) {
    if (t.m != -e) throw std::logic_error("generating_domain_reduction: m != -floor(n/2) on the low branch");
    return {p, n, t.m, t.ell, t.nu, false};
  }
  MirrorResult mr = mirror(p, t);
  const CosetTriple& im = mr.image;
  if (2 * im.ell > n || im.m != -(n - e))
    throw std::logic_error("generating_domain_reduction: mirrored triple outside the generating domain");
  LocalMatrix target = representative(p, im) * LocalMatrix::antidiag_pn(p, n);
  if (!find_witness(g, target, n))
    throw std::logic_error("generating_domain_reduction: no witness for g_p in ZN g' A K1 at p = " + std::to_string(p));
  return {p, n, im.m, im.ell, im.nu, true};
}

}  // namespace

DomainPoint generating_domain_reduction(const AdelicElement& g, const NewformSpecGlobal& spec) {
  if (g.finite.size() != spec.primes.size())
    throw std::invalid_argument("generating_domain_reduction: one local matrix per prime of N expected");
  if (!(g.y >= kSqrt3Half - 1e-12)) throw std::invalid_argument("generating_domain_reduction: y < sqrt(3)/2");
  DomainPoint out{g.x, g.y, {}};
  for (std::size_t i = 0; i < spec.primes.size(); ++i)
    out.locals.push_back(coordinate_from_matrix(g.finite[i], spec.primes[i], true));
  validate_domain_point(spec, out);
  return out;
}

DomainPoint direct_coordinates(const AdelicElement& g, const NewformSpecGlobal& spec) {
  if (g.finite.size() != spec.primes.size())
    throw std::invalid_argument("direct_coordinates: one local matrix per prime of N expected");
  DomainPoint out{g.x, g.y, {}};
  for (std::size_t i = 0; i < spec.primes.size(); ++i)
    out.locals.push_back(coordinate_from_matrix(g.finite[i], spec.primes[i], false));
  return out;
}

bool SupportProgression::contains_index(std::int64_t n) const {
  if (n == 0) return false;
  std::uint64_t a = static_cast<std::uint64_t>(n < 0 ? -n : n);
  if (gcd_u64(a, coprimality_modulus) != 1) return false;
  std::int64_t M = static_cast<std::int64_t>(modulus);
  std::int64_t r = ((n % M) + M) % M;
  std::uint64_t t = r == 0 ? modulus : static_cast<std::uint64_t>(r);
  return std::binary_search(residues.begin(), residues.end(), t);
}

std::vector<std::uint64_t> smooth_numbers(const std::vector<std::uint64_t>& primes, std::uint64_t bound) {
  std::vector<std::uint64_t> out{1};
  if (bound < 1) return {};
  for (auto p : primes) {
    std::size_t sz = out.size();
    for (std::size_t i = 0; i < sz; ++i) {
      std::uint64_t x = out[i];
      while (x <= bound / p) {
        x *= p;
        out.push_back(x);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SupportProgression support_progression(const GlobalContext& ctx, const DomainPoint& point,
                                       const RamificationProfile& profile, std::uint64_t s, std::uint64_t u) {
  const auto& spec = ctx.spec();
  SupportProgression out;
  out.s = s;
  out.u = u;
  out.coprimality_modulus = spec.N;
  out.modulus = profile.modulus();
  out.scale = Rational(Integer(s) * Integer(u) * Integer(profile.plus.N),
                       Integer(profile.N2) * Integer(profile.plus.L) * Integer(profile.plus.C));
  out.scale.canonicalize();
  // per-prime residue sets modulo p^{l - a2} at the primes of H+
  std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> conditions;
  for (std::size_t i = 0; i < spec.primes.size(); ++i) {
    const auto& d = spec.primes[i];
    const auto& c = point.locals[i];
    if (!d.high() || c.ell <= d.a2()) continue;
    unsigned e = static_cast<unsigned>(c.ell - d.a2());
    unsigned k = static_cast<unsigned>(ell_n(c.ell, c.n));
    std::uint64_t mod_e = ipow(d.p, e), mod_k = ipow(d.p, k);
    int v = valuation(out.scale, d.p).value();
    std::uint64_t su = unit_residue(out.scale, d.p, k);
    std::set<std::uint64_t> allowed;
    for (auto w : unit_residues(d.p, k)) {
      std::uint64_t unit = mod_mul(su, w, mod_k);
      std::uint64_t nu = mod_mul(c.nu, mod_inverse(unit, mod_k), mod_k);
      if (ctx.factor(i).magnitude(c.conjugated, c.m + v, c.ell, nu) > 0.0) allowed.insert(w % mod_e);
    }
    if (allowed.empty()) return out;
    conditions.emplace_back(mod_e, std::vector<std::uint64_t>(allowed.begin(), allowed.end()));
  }
  // Chinese remainder assembly
  std::vector<std::uint64_t> residues{0};
  std::uint64_t mod = 1;
  for (const auto& [m, rs] : conditions) {
    std::vector<std::uint64_t> next;
    std::uint64_t inv = mod_inverse(mod % m, m);
    for (auto r0 : residues)
      for (auto r1 : rs) {
        // x = r0 + mod * t with x = r1 mod m
        std::uint64_t diff = (r1 + m - r0 % m) % m;
        std::uint64_t t = mod_mul(diff, inv, m);
        next.push_back(r0 + mod * t);
      }
    mod *= m;
    residues = std::move(next);
  }
  if (mod != out.modulus) throw std::logic_error("support_progression: modulus mismatch");
  for (auto& r : residues)
    if (r == 0) r = mod;
  std::sort(residues.begin(), residues.end());
  out.residues = residues;
  return out;
}

namespace {

std::uint64_t scan_denominator(const NewformSpecGlobal& spec, const RamificationProfile& prof) {
  return spec.N * prof.L;
}

}  // namespace

std::vector<std::int64_t> brute_force_support(const GlobalContext& ctx, const DomainPoint& point,
                                              std::int64_t bound) {
  auto prof = ramification_profile(ctx.spec(), point);
  ScaledEvaluator ev(ctx, point, scan_denominator(ctx.spec(), prof));
  std::vector<std::int64_t> out;
  for (std::int64_t a = -bound; a <= bound; ++a)
    if (a != 0 && ev.local(a) > 0.0) out.push_back(a);
  return out;
}

std::vector<std::int64_t> progression_support(const GlobalContext& ctx, const DomainPoint& point,
                                              std::int64_t bound) {
  const auto& spec = ctx.spec();
  auto prof = ramification_profile(spec, point);
  std::uint64_t D = scan_denominator(spec, prof);
  Rational unit = Rational(Integer(prof.plus.N) * Integer(D), Integer(prof.N2) * Integer(prof.plus.L) * Integer(prof.plus.C));
  unit.canonicalize();
  std::int64_t c0 = integral_numerator(unit);
  std::uint64_t sbound = static_cast<std::uint64_t>(bound / c0);
  std::vector<std::int64_t> out;
  for (auto s : smooth_numbers(prof.high_equal, sbound))
    for (auto u : smooth_numbers(prof.low, sbound / s)) {
      auto prog = support_progression(ctx, point, prof, s, u);
      if (prog.empty()) continue;
      std::int64_t c = integral_numerator(prog.scale * Rational(Integer(D)));
      std::int64_t nmax = bound / c;
      for (std::int64_t n = -nmax; n <= nmax; ++n)
        if (prog.contains_index(n)) out.push_back(c * n);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SupportCheck compare_support(const GlobalContext& ctx, const DomainPoint& point, std::int64_t bound) {
  auto brute = brute_force_support(ctx, point, bound);
  auto prog = progression_support(ctx, point, bound);
  SupportCheck r;
  r.brute = brute.size();
  r.progression = prog.size();
  std::vector<std::int64_t> diff;
  std::set_difference(brute.begin(), brute.end(), prog.begin(), prog.end(), std::back_inserter(diff));
  r.missing = diff.size();
  diff.clear();
  std::set_difference(prog.begin(), prog.end(), brute.begin(), brute.end(), std::back_inserter(diff));
  r.extra = diff.size();
  return r;
}

double pairwise_sum(std::vector<double>& v) {
  if (v.empty()) return 0.0;
  std::size_t n = v.size();
  while (n > 1) {
    std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < n / 2; ++i) v[i] = v[2 * i] + v[2 * i + 1];
    if (n % 2 == 1) v[n / 2] = v[n - 1];
    n = half;
  }
  return v[0];
}

MajorantReport majorant_sum(const GlobalContext& ctx, const DomainPoint& point, const EigenvalueSource& lambda,
                            const Truncation& trunc) {
  const auto& spec = ctx.spec();
  auto prof = ramification_profile(spec, point);
  std::uint64_t D = scan_denominator(spec, prof);
  ScaledEvaluator ev(ctx, point, D);
  std::uint64_t A = window_bound(spec, trunc, point.y, D);
  Rational unit = Rational(Integer(prof.plus.N) * Integer(D), Integer(prof.N2) * Integer(prof.plus.L) * Integer(prof.plus.C));
  unit.canonicalize();
  std::uint64_t c0 = static_cast<std::uint64_t>(integral_numerator(unit));
  std::uint64_t reach = A / c0;
  std::uint64_t sbound = std::min(trunc.smax, reach);
  TermSum acc;
  for (auto s : smooth_numbers(prof.high_equal, sbound))
    for (auto u : smooth_numbers(prof.low, std::min(trunc.smax, reach / s))) {
      auto prog = support_progression(ctx, point, prof, s, u);
      if (prog.empty()) continue;
      std::int64_t c = integral_numerator(prog.scale * Rational(Integer(D)));
      std::int64_t nmax = static_cast<std::int64_t>(A) / c;
      std::int64_t M = static_cast<std::int64_t>(prog.modulus);
      for (auto t : prog.residues) {
        std::int64_t start = static_cast<std::int64_t>(t) - M * floor_div(static_cast<std::int64_t>(t) + nmax, M);
        for (std::int64_t n = start; n <= nmax; n += M) {
          if (n == 0 || !prog.contains_index(n)) continue;
          add_term(acc, ev, spec, lambda, c * n, point.y);
        }
      }
    }
  MajorantReport r;
  r.terms = acc.terms.size();
  r.max_lambda_index = acc.max_index;
  r.value = spec.config.c_phi * pairwise_sum(acc.terms);
  // smooth indices past smax start at (smax + 1) c0
  double tail_start = static_cast<double>(A) + 1.0;
  if (trunc.smax < reach) tail_start = std::min(tail_start, static_cast<double>((trunc.smax + 1) * c0));
  r.tail_certificate = spec.config.c_phi * majorant_tail(ctx, point.y, D, tail_start);
  return r;
}


namespace {

std::uint64_t flat_denominator(const DomainPoint& point) {
  std::uint64_t D = 1;
  for (const auto& c : point.locals) D *= ipow(c.p, static_cast<unsigned>(std::max(c.n + c.ell, c.n + c.ell + c.m)));
  return D;
}

}  // namespace

MajorantReport majorant_sum_flat(const GlobalContext& ctx, const DomainPoint& point, const EigenvalueSource& lambda,
                                 const Truncation& trunc) {
  const auto& spec = ctx.spec();
  std::uint64_t D = flat_denominator(point);
  ScaledEvaluator ev(ctx, point, D);
  std::uint64_t A = window_bound(spec, trunc, point.y, D);
  TermSum acc;
  std::int64_t sA = static_cast<std::int64_t>(A);
  for (std::int64_t a = -sA; a <= sA; ++a)
    if (a != 0) add_term(acc, ev, spec, lambda, a, point.y);
  MajorantReport r;
  r.terms = acc.terms.size();
  r.max_lambda_index = acc.max_index;
  r.value = spec.config.c_phi * pairwise_sum(acc.terms);
  r.tail_certificate = spec.config.c_phi * majorant_tail(ctx, point.y, D, static_cast<double>(A) + 1.0);
  return r;
}

double smooth_sum(const std::vector<std::uint64_t>& primes, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0 / std::log(2.0) + 1e-15))
    throw std::invalid_argument("smooth_sum: alpha must lie in (0, 1/log 2]");
  double prod = 1.0;
  for (auto p : primes) prod /= 1.0 - std::pow(static_cast<double>(p), -alpha);
  double bound = std::pow(2.0 / (alpha * std::log(2.0)), static_cast<double>(primes.size()));
  if (prod > bound * (1.0 + 1e-12)) throw std::logic_error("smooth_sum: bound (2/(alpha log 2))^#P exceeded");
  return prod;
}

double maxram_bound(const GlobalContext& ctx, const DomainPoint& point) {
  const auto& spec = ctx.spec();
  if (!spec.maximally_ramified()) throw std::invalid_argument("maxram_bound: needs N = C");
  for (const auto& d : spec.primes)
    if (!d.high() || d.rep->regime() != Regime::Max)
      throw std::invalid_argument("maxram_bound: regime MAX required at every prime");
  auto prof = ramification_profile(spec, point);
  double eps = spec.epsilon(), delta = spec.delta.get_d();
  double L = static_cast<double>(prof.L), N2 = static_cast<double>(prof.N2), y = point.y;
  return spec.config.c_phi * std::pow(N2 * L / y, eps) *
         (std::sqrt(L) + std::pow(N2, 0.5 + delta) * std::pow(L, delta) / y) * smooth_sum(prof.high_equal, 0.5);
}

std::pair<double, double> periodic_cs_sides(const std::vector<double>& a_period, const std::vector<double>& b) {
  std::size_t T = a_period.size();
  if (T == 0) throw std::invalid_argument("periodic_cs_sides: empty period");
  double lhs = 0.0, M = 0.0;
  for (double a : a_period) M += a * a;
  for (std::size_t i = 0; i < b.size(); ++i) lhs += a_period[i % T] * b[i];
  double rhs = 0.0;
  for (std::size_t k = 0; k * T < b.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < T && k * T + j < b.size(); ++j) s += b[k * T + j] * b[k * T + j];
    rhs += std::sqrt(s);
  }
  return {lhs, std::sqrt(M) * rhs};
}

CsReport periodic_cs_bound(const GlobalContext& ctx, const DomainPoint& point, const EigenvalueSource& lambda,
                           const Truncation& trunc) {
  const auto& spec = ctx.spec();
  auto prof = ramification_profile(spec, point);
  std::uint64_t D = scan_denominator(spec, prof);
  ScaledEvaluator ev(ctx, point, D);
  std::uint64_t A = window_bound(spec, trunc, point.y, D);
  Rational unit = Rational(Integer(prof.plus.N) * Integer(D), Integer(prof.N2) * Integer(prof.plus.L) * Integer(prof.plus.C));
  unit.canonicalize();
  std::uint64_t c0 = static_cast<std::uint64_t>(integral_numerator(unit));
  std::uint64_t reach = A / c0;
  std::uint64_t L = prof.L;
  double phiL = 1.0;
  for (const auto& c : point.locals) phiL *= static_cast<double>(units_count(c.p, static_cast<unsigned>(c.ell)));
  auto [C, r] = envelope_shape(spec.arch, 1.0);
  double delta = spec.delta.get_d();
  CsReport out;
  std::vector<double> blocks, tails;
  for (auto s : smooth_numbers(prof.high_equal, std::min(trunc.smax, reach)))
    for (auto u : smooth_numbers(prof.low, std::min(trunc.smax, reach / s))) {
      auto prog = support_progression(ctx, point, prof, s, u);
      if (prog.empty()) continue;
      std::int64_t c = integral_numerator(prog.scale * Rational(Integer(D)));
      // a_n over one period, represented by integers prime to N
      double M = 0.0;
      for (std::uint64_t rr = 1; rr <= L; ++rr) {
        if (gcd_u64(rr, L) != 1) continue;
        std::uint64_t rep = rr;
        while (gcd_u64(rep, spec.N) != 1) rep += L;
        double a = ev.local(c * static_cast<std::int64_t>(rep));
        M += a * a;
      }
      double Mprod = phiL;
      for (std::size_t i = 0; i < ctx.size(); ++i) {
        const auto& lc = point.locals[i];
        int v = valuation(prog.scale, lc.p).value();
        Mprod *= ctx.factor(i).l2_average(lc.conjugated, lc.m + v, lc.ell);
      }
      double denom = std::max(Mprod, 1e-300);
      out.max_m_mismatch = std::max(out.max_m_mismatch, std::abs(M - Mprod) / denom);
      out.max_m_ratio =
          std::max(out.max_m_ratio, M / (static_cast<double>(L) / std::sqrt(static_cast<double>(s * u))));
      if (M == 0.0) continue;
      std::int64_t nmax = static_cast<std::int64_t>(A) / c;
      std::map<std::int64_t, double> S;
      double h = static_cast<double>(c) * point.y / static_cast<double>(D);
      for (std::int64_t n = -nmax; n <= nmax; ++n) {
        if (!prog.contains_index(n)) continue;
        std::uint64_t an = static_cast<std::uint64_t>(n < 0 ? -n : n);
        double b = lambda.abs_lambda(an) / std::sqrt(static_cast<double>(an)) * std::abs(kappa(spec.arch, h * static_cast<double>(n)));
        S[floor_div(n, static_cast<std::int64_t>(L))] += b * b;
      }
      std::vector<double> roots;
      for (auto& [k, v] : S) roots.push_back(std::sqrt(v));
      blocks.push_back(std::sqrt(M) * pairwise_sum(roots));
      // blocks past the window, both signs, each of length L meeting at most two S_k
      double beta = kTwoPi * h;
      double K = 2.0 * C * std::pow(h, r);
      double start = static_cast<double>(nmax) + 1.0;
      double tail;
      if (beta * start < 1.0) {
        tail = std::numeric_limits<double>::infinity();
      } else {
        double first = K * std::pow(start, delta + r) * std::exp(-beta * start);
        double rest = exp_tail(K, delta + r, beta, start) / static_cast<double>(L);
        tail = std::sqrt(M) * 4.0 * std::sqrt(static_cast<double>(L)) * (first + rest);
      }
      tails.push_back(tail);
      ++out.blocks;
    }
  out.bound = spec.config.c_phi * pairwise_sum(blocks);
  out.tail_certificate = spec.config.c_phi * pairwise_sum(tails);
  if (trunc.smax < reach) out.tail_certificate = std::numeric_limits<double>::infinity();
  return out;
}

double evaluate(const PrimeExponents& e) {
  double log_value = 0.0;
  for (const auto& [p, r] : e) log_value += r.get_d() * std::log(static_cast<double>(p));
  return std::exp(log_value);
}

PrimeExponents exponent_difference(const PrimeExponents& a, const PrimeExponents& b) {
  PrimeExponents out = a;
  for (const auto& [p, r] : b) out[p] -= r;
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

PrimeExponents level_power(const NewformSpecGlobal& spec, const Rational& r) {
  PrimeExponents out;
  for (const auto& d : spec.primes)
    if (r != 0) out[d.p] = r * d.n;
  return out;
}

Comparators theorem_comparators(const NewformSpecGlobal& spec) {
  Comparators c;
  const Rational& eps = spec.config.epsilon;
  for (const auto& d : spec.primes) {
    Rational half_ceil((d.n + 1) / 2, 2);
    half_ceil.canonicalize();
    Rational up = (spec.delta + eps) * d.n + half_ceil;
    Rational triv = (Rational(1, 2) + eps) * d.n;
    if (up != 0) c.upper_exponents[d.p] = up;
    if (triv != 0) c.trivial_exponents[d.p] = triv;
  }
  c.upper = evaluate(c.upper_exponents);
  c.trivial_upper = evaluate(c.trivial_exponents);
  if (spec.maximally_ramified()) {
    PrimeExponents low;
    for (const auto& d : spec.primes) {
      Rational half_floor(d.n / 2, 2);
      half_floor.canonicalize();
      Rational lo = -eps * d.n + half_floor;
      if (lo != 0) low[d.p] = lo;
    }
    c.lower = evaluate(low);
    c.lower_exponents = low;
  }
  return c;
}

NormalizationInterval adjoint_normalization(const NewformSpecGlobal& spec, const EigenvalueSource& lambda,
                                            std::uint64_t cutoff) {
  if (cutoff < 16) throw std::invalid_argument("adjoint_normalization: cutoff too small, interval degenerate");
  constexpr double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  constexpr double xi2 = std::numbers::pi / 6.0;
  // Rankin-Selberg: sum_{n <= X} |lambda(n)|^2 / n ~ (L(1, Ad) / zeta(2)) log X
  std::uint64_t inner = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(cutoff)));
  double partial = 0.0, at_inner = 0.0;
  for (std::uint64_t n = 1; n <= cutoff; ++n) {
    partial += std::norm(lambda.lambda(n)) / static_cast<double>(n);
    if (n == inner) at_inner = partial;
  }
  double e1 = zeta2 * partial / std::log(static_cast<double>(cutoff));
  double e0 = zeta2 * at_inner / std::log(static_cast<double>(inner));
  NormalizationInterval out;
  out.adjoint_low = std::min(e0, e1);
  out.adjoint_high = std::max(e0, e1);
  out.local_low = 1.0;
  out.local_high = std::pow(2.0, static_cast<double>(spec.primes.size()));
  out.low = 1.0 / std::sqrt(2.0 * xi2 * out.adjoint_high * out.local_high * out.local_high);
  out.high = 1.0 / std::sqrt(2.0 * xi2 * out.adjoint_low * out.local_low * out.local_low);
  return out;
}

std::vector<ScanRow> scan(const GlobalContext& ctx, const std::vector<DomainPoint>& points,
                          const EigenvalueSource& lambda, const Truncation& trunc, unsigned parallel) {
  const auto& spec = ctx.spec();
  Comparators cmp = theorem_comparators(spec);
  bool maxram = spec.maximally_ramified() &&
                std::all_of(spec.primes.begin(), spec.primes.end(),
                            [](const PrimeData& d) { return d.high() && d.rep->regime() == Regime::Max; });
  std::function<ScanRow(std::size_t)> fn = [&](std::size_t i) {
    const DomainPoint& pt = points[i];
    auto prof = ramification_profile(spec, pt);
    ScanRow row;
    row.point_id = i;
    row.point = pt;
    row.L = prof.L;
    row.N2 = prof.N2;
    auto maj = majorant_sum(ctx, pt, lambda, trunc);
    row.majorant = maj.value;
    row.tail_certificate = maj.tail_certificate;
    if (maxram) row.maxram = maxram_bound(ctx, pt);
    row.cs_bound = periodic_cs_bound(ctx, pt, lambda, trunc).bound;
    row.upper = cmp.upper;
    row.lower = cmp.lower;
    return row;
  };
  return parallel_map<ScanRow>(points.size(), parallel, fn);
}

}  // namespace gl2sup
