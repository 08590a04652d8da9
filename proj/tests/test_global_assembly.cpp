#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gl2sup/global_assembly.hpp"

using namespace gl2sup;

namespace {

NewformSpecGlobal spec_of(const char* name) { return load_spec(std::string(GL2SUP_TEST_DATA) + "/" + name); }

}  // namespace

TEST(Domain, EnumerationCountsForNine) {
  // n = 2: l in {0, 1}, 1 + 2 nu classes, S in {-, 3}, three y values
  auto pts = enumerate_domain_points(spec_of("n9.json"));
  EXPECT_EQ(pts.size(), 3u * 2u * 3u);
  for (const auto& p : pts) EXPECT_NO_THROW(validate_domain_point(spec_of("n9.json"), p));
}

TEST(Domain, ValidationRejects) {
  auto spec = spec_of("n9.json");
  DomainPoint p{0.0, 1.0, {{3, 2, -1, 1, 1, false}}};
  EXPECT_NO_THROW(validate_domain_point(spec, p));
  p.locals[0].ell = 2;
  EXPECT_THROW(validate_domain_point(spec, p), std::invalid_argument);
  p.locals[0].ell = 1;
  p.locals[0].m = 0;
  EXPECT_THROW(validate_domain_point(spec, p), std::invalid_argument);
  p.locals[0].m = -1;
  p.y = 0.5;
  EXPECT_THROW(validate_domain_point(spec, p), std::invalid_argument);
}

TEST(Domain, SamplingIsSeededAndOrdered) {
  auto spec = spec_of("n729.json");
  auto a = sample_domain_points(spec, 10, 4), b = sample_domain_points(spec, 10, 4);
  ASSERT_EQ(a.size(), 10u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].to_string(), b[i].to_string());
  EXPECT_NE(sample_domain_points(spec, 10, 5)[0].to_string() + sample_domain_points(spec, 10, 5)[9].to_string(),
            a[0].to_string() + a[9].to_string());
}

TEST(Profile, MixedLevel) {
  auto spec = spec_of("mixed_675.json");
  // a2(3) = 0, so l = 1 at 3 puts 3 in the l > a2 class
  DomainPoint p{0.0, 1.0, {{3, 3, -2, 1, 2, false}, {5, 2, -1, 1, 3, false}}};
  auto r = ramification_profile(spec, p);
  EXPECT_EQ(r.L, 15u);
  EXPECT_EQ(r.N1, 45u);
  EXPECT_EQ(r.N2, 15u);
  EXPECT_EQ(r.high_plus, std::vector<std::uint64_t>{3});
  EXPECT_TRUE(r.high_equal.empty());
  EXPECT_EQ(r.low, std::vector<std::uint64_t>{5});
  EXPECT_EQ(r.modulus(), 3u);
  p.locals[0].ell = 0;
  p.locals[0].nu = 1;
  EXPECT_EQ(ramification_profile(spec, p).high_equal, std::vector<std::uint64_t>{3});
}

TEST(LocalFactor, LowPrimeModelAverage) {
  PrimeData d;
  d.p = 5;
  d.n = 2;
  d.c = 0;
  d.l2_constant = 4.0;
  LocalFactor f(d, 1);
  EXPECT_NEAR(f.l2_average(false, -2, 1), 4.0, 1e-12);
  EXPECT_NEAR(f.l2_average(false, 0, 1), 4.0 / 5.0, 1e-12);
  EXPECT_EQ(f.magnitude(false, -3, 1, 1), 0.0);
}

TEST(Reduction, MagnitudesSurviveTheReduction) {
  for (const char* name : {"n9.json", "n81.json"}) {
    auto spec = spec_of(name);
    const auto& d = spec.primes[0];
    WhittakerOracle oracle(*d.rep);
    GlobalContext ctx(spec);
    std::mt19937_64 rng(3);
    int e = d.n / 2;
    std::size_t mirrored = 0;
    for (int i = 0; i < 60; ++i) {
      LocalMatrix g = random_gl2_zp(d.p, rng) * LocalMatrix::a(d.p, prime_power(d.p, e));
      AdelicElement el{0.0, 1.0, {g}};
      auto pt = generating_domain_reduction(el, spec);
      const auto& c = pt.locals[0];
      mirrored += c.conjugated;
      EXPECT_NEAR(ctx.factor(0).magnitude(c.conjugated, c.m, c.ell, c.nu), std::abs(oracle.value_at(g)), 1e-8)
          << pt.to_string();
    }
    EXPECT_GT(mirrored, 0u);
  }
}

TEST(Reduction, DirectCoordinatesKeepLargeEll) {
  auto spec = spec_of("n9.json");
  LocalMatrix g = representative(3, make_triple(3, 2, -2, 2, 1));
  auto pt = direct_coordinates(AdelicElement{0.0, 1.0, {g}}, spec);
  EXPECT_EQ(pt.locals[0].ell, 2);
  EXPECT_FALSE(pt.locals[0].conjugated);
}

TEST(Support, ExactForSquareLevels) {
  for (const char* name : {"n9.json", "n25.json", "n225.json"}) {
    GlobalContext ctx(spec_of(name));
    for (const auto& pt : enumerate_domain_points(ctx.spec())) {
      auto c = compare_support(ctx, pt, 3000);
      EXPECT_TRUE(c.exact()) << name << " " << pt.to_string() << " missing " << c.missing << " extra " << c.extra;
    }
  }
}

TEST(Support, SmoothNumbers) {
  EXPECT_EQ(smooth_numbers({2, 3}, 10), (std::vector<std::uint64_t>{1, 2, 3, 4, 6, 8, 9}));
  EXPECT_EQ(smooth_numbers({}, 10), (std::vector<std::uint64_t>{1}));
}

TEST(Majorant, IndexedEqualsFlat) {
  DivisorEigenvalues lambda(1 << 16);
  for (const char* name : {"n27.json", "mixed_675.json"}) {
    GlobalContext ctx(spec_of(name));
    auto tr = default_truncation(ctx.spec());
    for (const auto& pt : sample_domain_points(ctx.spec(), 12, 1)) {
      auto a = majorant_sum(ctx, pt, lambda, tr), b = majorant_sum_flat(ctx, pt, lambda, tr);
      EXPECT_NEAR(a.value, b.value, 1e-9 * std::max(1.0, b.value));
      EXPECT_EQ(a.terms > 0, b.terms > 0);
      EXPECT_LT(a.tail_certificate, ctx.spec().config.tolerance);
    }
  }
}

TEST(Majorant, BelowCauchySchwarz) {
  DivisorEigenvalues lambda(1 << 16);
  for (const char* name : {"n9.json", "n81.json", "mixed_675.json"}) {
    GlobalContext ctx(spec_of(name));
    auto tr = default_truncation(ctx.spec());
    for (const auto& pt : sample_domain_points(ctx.spec(), 16, 2)) {
      double m = majorant_sum(ctx, pt, lambda, tr).value;
      auto cs = periodic_cs_bound(ctx, pt, lambda, tr);
      EXPECT_LE(m, cs.bound * (1 + 1e-12)) << pt.to_string();
      EXPECT_LT(cs.max_m_mismatch, 1e-9);
      EXPECT_TRUE(std::isfinite(cs.tail_certificate));
    }
  }
}

TEST(Majorant, MaxramBoundOnlyForMaxRegime) {
  auto spec = spec_of("n81.json");
  GlobalContext ctx(spec);
  auto pt = enumerate_domain_points(spec).front();
  EXPECT_GT(maxram_bound(ctx, pt), 0.0);
  GlobalContext mixed(spec_of("mixed_675.json"));
  EXPECT_THROW(maxram_bound(mixed, enumerate_domain_points(mixed.spec()).front()), std::invalid_argument);
}

TEST(CauchySchwarz, SidesOnRandomData) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(7), b(100);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    auto [lhs, rhs] = periodic_cs_sides(a, b);
    EXPECT_LE(lhs, rhs * (1 + 1e-12));
  }
}

TEST(SmoothSum, EulerProductAndBound) {
  EXPECT_NEAR(smooth_sum({3}, 0.5), 1.0 / (1.0 - 1.0 / std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(smooth_sum({}, 0.5), 1.0, 0.0);
  EXPECT_THROW(smooth_sum({3}, 2.0), std::invalid_argument);
}

TEST(Comparators, FrozenExponents) {
  auto spec = spec_of("n9.json");
  auto c = theorem_comparators(spec);
  // (0 + 1/100) 2 + ceil(2/2)/2 = 13/25 ; lower -2/100 + 1/2 = 12/25
  EXPECT_EQ(c.upper_exponents.at(3), Rational(13, 25));
  EXPECT_EQ(c.lower_exponents->at(3), Rational(12, 25));
  EXPECT_EQ(c.trivial_exponents.at(3), Rational(51, 50));
  EXPECT_NEAR(c.upper, std::pow(3.0, 0.52), 1e-12);
}

TEST(Comparators, NoLowerBoundForMixedLevel) {
  EXPECT_FALSE(theorem_comparators(spec_of("mixed_675.json")).lower.has_value());
}

TEST(Comparators, OddExponentIdentityFails) {
  // For n odd the ceil/floor split leaves an extra p^{1/2}.
  auto c = theorem_comparators(spec_of("n27.json"));
  auto diff = exponent_difference(c.upper_exponents, *c.lower_exponents);
  EXPECT_EQ(diff.at(3), Rational(14, 25));
}

TEST(Adjoint, IntervalShape) {
  auto spec = spec_of("n9.json");
  DivisorEigenvalues d(1 << 16);
  EXPECT_THROW(adjoint_normalization(spec, d, 10), std::invalid_argument);
  auto a = adjoint_normalization(spec, d, 1 << 10), b = adjoint_normalization(spec, d, 1 << 16);
  EXPECT_LT(a.low, a.high);
  EXPECT_DOUBLE_EQ(a.local_high, 2.0);
  // d(n)^2 / n sums like log^4 X, so the estimate keeps growing with X
  EXPECT_GT(b.adjoint_high, a.adjoint_high);
  std::vector<std::complex<double>> ones(1 << 12, 1.0);
  TableEigenvalues flat(ones);
  // |lambda| = 1: zeta(2) H(X) / log X tends to zeta(2)
  auto f = adjoint_normalization(spec, flat, 1 << 12);
  EXPECT_NEAR(f.adjoint_high, std::numbers::pi * std::numbers::pi / 6.0, 0.6);
}

TEST(Scan, ParallelMatchesSerial) {
  auto spec = spec_of("n225.json");
  GlobalContext ctx(spec);
  DivisorEigenvalues lambda(1 << 16);
  auto pts = sample_domain_points(spec, 24, 0);
  auto a = scan(ctx, pts, lambda, default_truncation(spec), 1);
  auto b = scan(ctx, pts, lambda, default_truncation(spec), 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].majorant, b[i].majorant);
    EXPECT_EQ(a[i].cs_bound, b[i].cs_bound);
    EXPECT_EQ(a[i].point_id, i);
  }
}

TEST(Scan, MissingEigenvalueSurfaces) {
  auto spec = spec_of("n9_lambda16.json");
  GlobalContext ctx(spec);
  auto table = TableEigenvalues::from_file(*spec.lambda_file);
  auto pts = enumerate_domain_points(spec);
  try {
    scan(ctx, pts, table, default_truncation(spec), 3);
    FAIL();
  } catch (const MissingEigenvalue& e) {
    EXPECT_EQ(e.index(), 17u);
  }
}

TEST(PairwiseSum, FixedOrder) {
  std::vector<double> v{1e16, 1.0, -1e16, 1.0, 3.0};
  double expect = ((1e16 + 1.0) + (-1e16 + 1.0)) + 3.0;
  EXPECT_EQ(pairwise_sum(v), expect);
}
