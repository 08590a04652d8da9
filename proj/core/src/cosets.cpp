#include "gl2sup/cosets.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace gl2sup {

std::string CosetTriple::to_string() const {
  std::ostringstream os;
  os << "(m=" << m << ", l=" << ell << ", nu=" << nu << ", n=" << n << ")";
  return os.str();
}

std::uint64_t canonical_nu(std::uint64_t p, std::int64_t nu, unsigned k) {
  if (k == 0) return 1;
  std::int64_t mod = static_cast<std::int64_t>(ipow(p, k));
  std::int64_t r = ((nu % mod) + mod) % mod;
  if (r % static_cast<std::int64_t>(p) == 0) throw std::invalid_argument("canonical_nu: nu is not a unit");
  return static_cast<std::uint64_t>(r);
}

CosetTriple make_triple(std::uint64_t p, int n, int m, int ell, std::int64_t nu) {
  if (ell < 0 || ell > n) throw std::invalid_argument("make_triple: l out of range");
  return CosetTriple{m, ell, canonical_nu(p, nu, static_cast<unsigned>(ell_n(ell, n))), n};
}

LocalMatrix representative(std::uint64_t p, const CosetTriple& t) {
  return LocalMatrix(p, 0, prime_power(p, t.m), -1, -prime_power(p, -t.ell) * Rational(static_cast<long>(t.nu)));
}

namespace {

using Vec4 = std::array<Rational, 4>;

struct LatticeColumn {
  Rational s, t;  // coordinates in the (s, t) plane
  Vec4 image;     // entries of k(s, t)
};

int min_valuation(const Vec4& v, std::uint64_t p) {
  int best = 0;
  bool first = true;
  for (const auto& e : v) {
    Valuation val = valuation(e, p);
    if (val.is_infinite()) continue;
    if (first || val.value() < best) best = val.value();
    first = false;
  }
  if (first) throw std::logic_error("lattice column vanished");
  return best;
}

void rescale(LatticeColumn& c, std::uint64_t p) {
  int v = min_valuation(c.image, p);
  if (v == 0) return;
  Rational f = prime_power(p, -v);
  c.s *= f;
  c.t *= f;
  for (auto& e : c.image) e *= f;
}

// Basis of {(s, t): k(s, t) integral}, image columns primitive and
// independent modulo p.
std::array<LatticeColumn, 2> integral_lattice(const Vec4& F1, const Vec4& F2, std::uint64_t p) {
  std::array<LatticeColumn, 2> cols{LatticeColumn{1, 0, F1}, LatticeColumn{0, 1, F2}};
  for (int iter = 0; iter < 10000; ++iter) {
    rescale(cols[0], p);
    rescale(cols[1], p);
    int pivot = -1;
    for (int i = 0; i < 4; ++i)
      if (cols[0].image[i] != 0 && valuation(cols[0].image[i], p) == Valuation(0)) {
        pivot = i;
        break;
      }
    std::uint64_t lam = mod_mul(reduce_mod_prime_power(cols[1].image[pivot], p, 1),
                                mod_inverse(reduce_mod_prime_power(cols[0].image[pivot], p, 1), p), p);
    Vec4 diff;
    bool dependent = true;
    for (int i = 0; i < 4; ++i) {
      diff[i] = cols[1].image[i] - Rational(static_cast<long>(lam)) * cols[0].image[i];
      if (!valuation(diff[i], p).at_least(1)) dependent = false;
    }
    if (!dependent) return cols;
    cols[1].s -= Rational(static_cast<long>(lam)) * cols[0].s;
    cols[1].t -= Rational(static_cast<long>(lam)) * cols[0].t;
    cols[1].image = diff;
  }
  throw std::logic_error("integral_lattice did not converge");
}

int residue_valuation(std::uint64_t r, std::uint64_t p, int cap) {
  if (r == 0) return cap;
  int v = 0;
  while (r % p == 0 && v < cap) {
    r /= p;
    ++v;
  }
  return v;
}

// Solutions of c*beta = r mod p^n as beta = b mod p^k, or nullopt.
std::optional<std::pair<std::uint64_t, int>> solve_linear(std::uint64_t c, std::uint64_t r, std::uint64_t p, int n) {
  int vc = residue_valuation(c, p, n);
  int vr = residue_valuation(r, p, n);
  if (vr < vc) return std::nullopt;
  int k = n - vc;
  if (k == 0) return std::make_pair(std::uint64_t(0), 0);
  std::uint64_t pv = ipow(p, static_cast<unsigned>(vc));
  std::uint64_t modk = ipow(p, static_cast<unsigned>(k));
  std::uint64_t b = mod_mul((r / pv) % modk, mod_inverse((c / pv) % modk, modk), modk);
  return std::make_pair(b, k);
}

}  // namespace

std::optional<CosetWitness> find_witness(const LocalMatrix& g, const LocalMatrix& h, int n) {
  if (n < 0) throw std::invalid_argument("find_witness: n must be >= 0");
  std::uint64_t p = g.prime();
  int dv = valuation(g.det(), p).value() - valuation(h.det(), p).value();
  if (dv % 2 != 0) return std::nullopt;

  LocalMatrix hinv = h.inverse();
  LocalMatrix M1 = hinv * g;
  // h^{-1} E12 g has rank one, so build it entrywise.
  const auto& hi = hinv.entries();
  Vec4 F2{hi[0] * g(1, 0), hi[0] * g(1, 1), hi[2] * g(1, 0), hi[2] * g(1, 1)};
  Vec4 F1 = M1.entries();
  auto basis = integral_lattice(F1, F2, p);

  int N = std::max(n, 1);
  std::uint64_t modN = ipow(p, static_cast<unsigned>(N));
  std::array<std::uint64_t, 4> r1, r2;
  for (int i = 0; i < 4; ++i) {
    r1[i] = reduce_mod_prime_power(basis[0].image[i], p, static_cast<unsigned>(N));
    r2[i] = reduce_mod_prime_power(basis[1].image[i], p, static_cast<unsigned>(N));
  }
  auto det_unit = [&](std::uint64_t al, std::uint64_t be) {
    std::uint64_t e[4];
    for (int i = 0; i < 4; ++i) e[i] = (mod_mul(al % p, r1[i] % p, p) + mod_mul(be % p, r2[i] % p, p)) % p;
    return (mod_mul(e[0], e[3], p) + p - mod_mul(e[1], e[2], p)) % p != 0;
  };

  auto build = [&](std::uint64_t al, std::uint64_t be) -> std::optional<CosetWitness> {
    Rational A(static_cast<long>(al)), B(static_cast<long>(be));
    Rational s = A * basis[0].s + B * basis[1].s;
    Rational t = A * basis[0].t + B * basis[1].t;
    if (s == 0) return std::nullopt;
    Rational zeta = 1 / s;
    Rational x = -t / s;
    LocalMatrix k = hinv * LocalMatrix(p, s, t, 0, s) * g;
    if (!in_k1(k, n)) return std::nullopt;
    if (!(LocalMatrix::z(p, zeta) * LocalMatrix::n(p, x) * h * k == g))
      throw std::logic_error("find_witness: reconstruction mismatch");
    return CosetWitness{zeta, x, k};
  };

  if (n == 0) {
    for (std::uint64_t al = 0; al < p; ++al)
      for (std::uint64_t be = 0; be < p; ++be)
        if (det_unit(al, be)) return build(al, be);
    return std::nullopt;
  }
  std::uint64_t modn = ipow(p, static_cast<unsigned>(n));
  for (std::uint64_t al = 0; al < modN; ++al) {
    // a = 1 and c = 0 modulo p^n
    std::uint64_t ra = (1 + modn - mod_mul(al, r1[0] % modn, modn)) % modn;
    std::uint64_t rc = (modn - mod_mul(al, r1[2] % modn, modn)) % modn;
    auto sa = solve_linear(r2[0] % modn, ra, p, n);
    if (!sa) continue;
    auto sc = solve_linear(r2[2] % modn, rc, p, n);
    if (!sc) continue;
    int k = std::max(sa->second, sc->second);
    int kmin = std::min(sa->second, sc->second);
    std::uint64_t mk = ipow(p, static_cast<unsigned>(kmin));
    if (sa->first % mk != sc->first % mk) continue;
    std::uint64_t b = sa->second >= sc->second ? sa->first : sc->first;
    if (k >= 1) {
      if (det_unit(al, b)) return build(al, b);
      continue;
    }
    for (std::uint64_t be = 0; be < p; ++be)
      if (det_unit(al, be)) return build(al, be);
  }
  return std::nullopt;
}

CosetReduction reduce_to_triple(const LocalMatrix& g, int n) {
  if (n < 0) throw std::invalid_argument("reduce_to_triple: n must be >= 0");
  std::uint64_t p = g.prime();
  const Rational& gamma = g(1, 0);
  const Rational& delta = g(1, 1);
  Valuation vg = valuation(gamma, p), vd = valuation(delta, p);
  int v0 = std::min(vg, vd).value();
  Rational scale = prime_power(p, -v0);
  Rational gp = gamma * scale, dp = delta * scale;
  bool delta_unit = valuation(dp, p) == Valuation(0);
  LocalMatrix kappa = delta_unit ? LocalMatrix(p, 1, 0, gp, dp) : LocalMatrix(p, 0, -1, gp, dp);
  LocalMatrix b = g * kappa.inverse();
  if (b(1, 0) != 0) throw std::logic_error("reduce_to_triple: Iwasawa step failed");
  Rational y = b(0, 0) / b(1, 1);

  int ell = valuation(gp, p).at_least(n) ? n : valuation(gp, p).value();
  int m = valuation(y, p).value() - 2 * ell;
  unsigned k = static_cast<unsigned>(ell_n(ell, n));
  std::uint64_t nu = 1;
  if (k > 0) {
    Rational gamma0 = gp * prime_power(p, -ell);
    Rational y0 = unit_part(y, p);
    nu = reduce_mod_prime_power(dp * gamma0 / (kappa.det() * y0), p, k);
  }
  CosetTriple t{m, ell, canonical_nu(p, static_cast<std::int64_t>(nu), k), n};
  auto w = find_witness(g, representative(p, t), n);
  if (!w) throw std::logic_error("reduce_to_triple: no witness for " + t.to_string() + " g=" + g.to_string());
  return CosetReduction{t, *w};
}

std::vector<CosetTriple> canonical_index_set(std::uint64_t p, int n, int m) {
  std::vector<CosetTriple> out;
  for (int ell = 0; ell <= n; ++ell) {
    unsigned k = static_cast<unsigned>(ell_n(ell, n));
    std::uint64_t mod = ipow(p, k);
    if (k == 0) {
      out.push_back(CosetTriple{m, ell, 1, n});
      continue;
    }
    for (std::uint64_t nu = 1; nu < mod; ++nu)
      if (nu % p != 0) out.push_back(CosetTriple{m, ell, nu, n});
  }
  return out;
}

MirrorResult mirror(std::uint64_t p, const CosetTriple& t) {
  int n = t.n;
  Rational nu(static_cast<long>(t.nu));
  Rational x = prime_power(p, t.ell + t.m) / nu;
  Rational zeta = prime_power(p, t.ell - n) / nu;
  Rational twist = -1 / (nu * nu);
  LocalMatrix lhs = LocalMatrix::n(p, x) * LocalMatrix::z(p, zeta) * representative(p, t) * LocalMatrix::antidiag_pn(p, n);
  int m2 = t.m + 2 * t.ell - n;
  int ell2 = n - t.ell;
  LocalMatrix raw(p, 0, prime_power(p, m2), -1, prime_power(p, -ell2) * nu);
  if (!(lhs == raw * LocalMatrix::diag(p, 1, twist)))
    throw std::logic_error("mirror identity failed for " + t.to_string());
  CosetTriple image{m2, ell2, canonical_nu(p, -static_cast<std::int64_t>(t.nu), static_cast<unsigned>(ell_n(ell2, n))), n};
  return MirrorResult{image, twist, x, zeta};
}

TranslateClass classify_translate(const LocalMatrix& g, int n, int e) {
  if (e < 0 || e > n) throw std::invalid_argument("classify_translate: e must lie in [0, n]");
  std::uint64_t p = g.prime();
  if (!(g * LocalMatrix::a(p, prime_power(p, -e))).in_gl2_zp())
    throw std::invalid_argument("classify_translate: g is not in K a(p^e)");
  CosetTriple t = reduce_to_triple(g, n).triple;
  TranslateBranch br = t.ell <= e ? TranslateBranch::LowEll : TranslateBranch::HighEll;
  int predicted = br == TranslateBranch::LowEll ? -e : -2 * t.ell + e;
  if (predicted != t.m)
    throw std::logic_error("classify_translate: branch formula disagrees with reduction " + t.to_string());
  return TranslateClass{t, br};
}

LocalMatrix random_gl2(std::uint64_t p, std::mt19937_64& rng, int max_val) {
  std::uniform_int_distribution<int> val(-max_val, max_val);
  std::uniform_int_distribution<long> num(-30, 30), den(1, 30);
  std::uniform_int_distribution<int> zero(0, 5);
  auto entry = [&]() -> Rational {
    if (zero(rng) == 0) return 0;
    long a = num(rng);
    if (a == 0) a = 1;
    Rational r(a, den(rng));
    r.canonicalize();
    return r * prime_power(p, val(rng));
  };
  for (;;) {
    Rational a = entry(), b = entry(), c = entry(), d = entry();
    if (a * d - b * c != 0) return LocalMatrix(p, a, b, c, d);
  }
}

LocalMatrix random_gl2_zp(std::uint64_t p, std::mt19937_64& rng) {
  long bound = static_cast<long>(std::min<std::uint64_t>(ipow(p, 4), 1000));
  std::uniform_int_distribution<long> d(-bound, bound);
  for (;;) {
    long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    Integer det = Integer(a) * e - Integer(b) * c;
    if (det != 0 && mpz_divisible_ui_p(det.get_mpz_t(), p) == 0) return LocalMatrix(p, a, b, c, e);
  }
}

LocalMatrix random_k1(std::uint64_t p, int n, std::mt19937_64& rng) {
  long bound = static_cast<long>(std::min<std::uint64_t>(ipow(p, 4), 1000));
  std::uniform_int_distribution<long> d(-bound, bound);
  Rational pn = prime_power(p, n);
  for (;;) {
    Rational a = 1 + pn * Rational(d(rng));
    Rational c = pn * Rational(d(rng));
    Rational b(d(rng)), e(d(rng));
    Rational det = a * e - b * c;
    if (det == 0 || !(valuation(det, p) == Valuation(0))) continue;
    return LocalMatrix(p, a, b, c, e);
  }
}

DisjointCoverReport verify_disjoint_cover(std::uint64_t p, int n, std::size_t samples, std::uint64_t seed, int m_min,
                                          int m_max) {
  DisjointCoverReport rep;
  rep.p = p;
  rep.n = n;
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    LocalMatrix g = random_gl2(p, rng);
    try {
      CosetReduction r = reduce_to_triple(g, n);
      if (in_k1(r.witness.k, n)) ++rep.covered;
    } catch (const std::exception& ex) {
      rep.failures.push_back(std::string("cover: ") + ex.what());
    }
  }
  std::vector<CosetTriple> all;
  for (int m = m_min; m <= m_max; ++m) {
    auto s = canonical_index_set(p, n, m);
    all.insert(all.end(), s.begin(), s.end());
  }
  rep.triples = all.size();
  std::vector<LocalMatrix> reps;
  reps.reserve(all.size());
  for (const auto& t : all) reps.push_back(representative(p, t));
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      ++rep.pairs_checked;
      if (find_witness(reps[i], reps[j], n)) {
        ++rep.overlaps;
        if (rep.failures.size() < 20)
          rep.failures.push_back("overlap: " + all[i].to_string() + " ~ " + all[j].to_string());
      }
    }
  }
  return rep;
}

}  // namespace gl2sup
