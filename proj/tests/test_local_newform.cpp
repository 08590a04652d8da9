#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gl2sup/local_newform.hpp"

using namespace gl2sup;

TEST(Regime, Classification) {
  EXPECT_EQ(make_principal_series(3, 2, 0).regime(), Regime::Max);
  EXPECT_EQ(make_principal_series(3, 1, 0).regime(), Regime::DiagOnly);
  EXPECT_EQ(make_principal_series(3, 3, 1).regime(), Regime::High);
  EXPECT_EQ(make_principal_series(3, 1, 1).regime(), Regime::SphericalExcluded);
  EXPECT_EQ(make_principal_series(3, 2, 2).regime(), Regime::SphericalExcluded);
  EXPECT_EQ(make_principal_series(2, 3, 0).regime(), Regime::Max);
}

TEST(PrincipalSeries, ContragredientInvertsCharacters) {
  auto rep = make_principal_series(5, 2, 1);
  auto c = rep.contragredient();
  EXPECT_EQ(c.chi1(), rep.chi1().inverse());
  EXPECT_EQ(c.n(), rep.n());
  EXPECT_EQ(c.c(), rep.c());
}

TEST(Diagonal, SupportAndNormalization) {
  // W(a(p^m)) = 1 at m = 0 and vanishes for m < 0
  auto rep = make_principal_series(3, 2, 0);
  EXPECT_NEAR(std::abs(diagonal_value(rep, 0) - Complex(1.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(diagonal_value(rep, -1)), 0.0, 1e-12);
}

TEST(BasicIdentity, ResidualSmall) {
  auto rep = make_principal_series(5, 2, 0);
  for (int ell = 0; ell <= 1; ++ell)
    for (const auto& mu : enumerate_characters(5, ell)) {
      auto c = solve_basic_identity(rep, ell, mu);
      EXPECT_LT(c.residual(), kWindowResidualTolerance);
    }
}

TEST(Oracle, NewformNormalization) {
  WhittakerOracle o(make_principal_series(3, 2, 0));
  // g_{0,0,1} lies in the same coset as w, and W(1) = 1 on the diagonal
  EXPECT_NEAR(std::abs(o.value_at(LocalMatrix::identity(3))), 1.0, 1e-9);
}

TEST(Oracle, InvariantUnderK1) {
  auto rep = make_principal_series(3, 2, 1);
  WhittakerOracle o(rep);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 30; ++i) {
    LocalMatrix g = random_gl2(3, rng);
    LocalMatrix k = random_k1(3, rep.n(), rng);
    EXPECT_NEAR(std::abs(o.value_at(g) - o.value_at(g * k)), 0.0, 1e-9);
  }
}

class ClosedForm : public ::testing::TestWithParam<std::tuple<int, int, int>> {};

TEST_P(ClosedForm, OracleMatchesTable) {
  auto [p, a1, a2] = GetParam();
  auto rep = make_principal_series(p, a1, a2);
  WhittakerOracle o(rep);
  auto r = compare_with_closed_form(o, -rep.n() - rep.n() / 2, 3);
  EXPECT_TRUE(r.ok()) << (r.details.empty() ? "" : r.details.front());
  EXPECT_GT(r.exact_checked, 0u);
}

INSTANTIATE_TEST_SUITE_P(Reps, ClosedForm,
                         ::testing::Values(std::tuple{3, 2, 0}, std::tuple{5, 2, 0}, std::tuple{3, 3, 0},
                                           std::tuple{3, 2, 1}, std::tuple{5, 2, 1}, std::tuple{3, 3, 1},
                                           std::tuple{3, 4, 1}, std::tuple{2, 3, 0}));

TEST(ClosedForm, AsPrintedHighRowDisagrees) {
  // The l = a2 row as printed caps the support; the oracle is nonzero
  // beyond that cap.
  auto rep = make_principal_series(3, 3, 1);
  WhittakerOracle o(rep);
  auto r = compare_with_closed_form(o, -rep.n() - 2, 3, 1e-8, HighTableVariant::AsPrinted);
  EXPECT_FALSE(r.ok());
}

TEST(Alpha, UnitModulus) {
  for (auto [p, a1, a2] : {std::tuple{3, 2, 0}, std::tuple{5, 2, 1}}) {
    auto rep = make_principal_series(p, a1, a2);
    WhittakerOracle pi(rep), pt(rep.contragredient());
    auto a = alpha_modulus(pi, pt, -rep.n() - 4, 2);
    EXPECT_NEAR(a.alpha, 1.0, 1e-8);
    EXPECT_LT(a.max_deviation, 1e-8);
  }
}

TEST(L2, SphericalRowFollowsTheUnramifiedCharacter) {
  // l = 0 with a2 = 0: |W(g_{m,0,1})|^2 = |chi2(p)|^{2k} q^{-k}, k = m + n
  auto rep = make_principal_series(5, 2, 0);
  WhittakerOracle o(rep);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(l2_average(o, k - 2, 0), std::pow(5.0, -k), 1e-9);
  EXPECT_NEAR(l2_average(o, -3, 0), 0.0, 1e-12);
}

TEST(Anchor, PrecisionPositiveForMax) {
  WhittakerOracle o(make_principal_series(5, 2, 0));
  auto a = discover_nu_anchor(o);
  EXPECT_GT(a.precision, 0u);
}

TEST(Table, CsvHeader) {
  auto rep = make_principal_series(3, 2, 0);
  WhittakerOracle o(rep);
  auto t = build_magnitude_table(rep, discover_nu_anchor(o), -3, 0);
  std::ostringstream os;
  write_magnitude_csv(os, t);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')).find("m"), 0u);
  EXPECT_FALSE(t.rows.empty());
}

TEST(Oracle, RejectsExcludedRegime) {
  EXPECT_THROW(WhittakerOracle(make_principal_series(3, 1, 1)), UnsupportedRegimeError);
}
