#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gl2sup/cosets.hpp"

using namespace gl2sup;

TEST(Representative, FrozenMatrix) {
  // g_{2,1,2} at p = 3
  auto t = make_triple(3, 2, 2, 1, 2);
  EXPECT_EQ(representative(3, t), LocalMatrix(3, 0, 9, -1, Rational(-2, 3)));
}

TEST(Triple, CanonicalNu) {
  EXPECT_EQ(canonical_nu(5, -1, 2), 24u);
  EXPECT_EQ(canonical_nu(5, 7, 0), 1u);
  // l_n = min(l, n - l): at n = 3, l = 2 the class is mod p
  EXPECT_EQ(make_triple(3, 3, 0, 2, 5).nu, 2u);
}

TEST(Triple, IndexSetSize) {
  // l = 0..n, each contributing phi(p^{l_n}) classes
  auto s = canonical_index_set(3, 4, -2);
  std::size_t expect = 1 + 2 + 6 + 2 + 1;
  EXPECT_EQ(s.size(), expect);
}

TEST(Reduction, WitnessRebuildsTheMatrix) {
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {2, 3, 5})
    for (int n = 0; n <= 3; ++n)
      for (int i = 0; i < 60; ++i) {
        LocalMatrix g = random_gl2(p, rng);
        auto r = reduce_to_triple(g, n);
        const auto& w = r.witness;
        EXPECT_EQ(LocalMatrix::z(p, w.zeta) * LocalMatrix::n(p, w.x) * representative(p, r.triple) * w.k, g);
        EXPECT_TRUE(in_k1(w.k, n));
      }
}

TEST(Reduction, InvariantUnderK1) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    LocalMatrix g = random_gl2(3, rng);
    LocalMatrix k = random_k1(3, 2, rng);
    EXPECT_EQ(reduce_to_triple(g, 2).triple, reduce_to_triple(g * k, 2).triple);
  }
}

TEST(Reduction, RepresentativesAreFixedPoints) {
  for (int m = -4; m <= 1; ++m)
    for (const auto& t : canonical_index_set(5, 2, m)) EXPECT_EQ(reduce_to_triple(representative(5, t), 2).triple, t);
}

TEST(Witness, DistinctTriplesDoNotOverlap) {
  auto r = verify_disjoint_cover(2, 3, 40, 3, -4, 1);
  EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures.front());
  EXPECT_GT(r.pairs_checked, 100u);
}

TEST(Mirror, SignOfNuOnTheImage) {
  auto t = make_triple(5, 3, -1, 1, 2);
  auto r = mirror(5, t);
  EXPECT_EQ(r.image.m, -1 + 2 - 3);
  EXPECT_EQ(r.image.ell, 2);
  EXPECT_EQ(r.image.nu, canonical_nu(5, -2, 1));
  EXPECT_EQ(r.twist, Rational(-1, 4));
}

TEST(Mirror, WholeGrid) {
  for (std::uint64_t p : {2, 3})
    for (int n = 1; n <= 3; ++n)
      for (int m = -6; m <= 2; ++m)
        for (const auto& t : canonical_index_set(p, n, m)) EXPECT_NO_THROW(mirror(p, t)) << t.to_string();
}

TEST(Translate, BranchFormula) {
  std::mt19937_64 rng(5);
  std::set<int> branches;
  for (int e = 0; e <= 3; ++e)
    for (int i = 0; i < 40; ++i) {
      LocalMatrix g = random_gl2_zp(3, rng) * LocalMatrix::a(3, prime_power(3, e));
      auto c = classify_translate(g, 3, e);
      branches.insert(static_cast<int>(c.branch));
      if (c.branch == TranslateBranch::LowEll)
        EXPECT_EQ(c.triple.m, -e);
      else
        EXPECT_EQ(c.triple.m, -2 * c.triple.ell + e);
    }
  EXPECT_EQ(branches.size(), 2u);
}

TEST(Translate, RejectsElementsOutsideKa) {
  EXPECT_THROW(classify_translate(LocalMatrix::a(3, Rational(1, 3)), 2, 0), std::invalid_argument);
}
