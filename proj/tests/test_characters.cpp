#include <gtest/gtest.h>

#include <numbers>

#include "gl2sup/characters.hpp"

using namespace gl2sup;

TEST(UnitGroup, CyclicForOddPrimes) {
  auto g = UnitGroup::get(5, 3);
  EXPECT_EQ(g->order(), 100u);
  EXPECT_EQ(g->generators().size(), 1u);
  EXPECT_EQ(g->exponent(), 100u);
}

TEST(UnitGroup, TwoHasTwoGenerators) {
  auto g = UnitGroup::get(2, 4);
  EXPECT_EQ(g->order(), 8u);
  ASSERT_EQ(g->generators().size(), 2u);
  EXPECT_EQ(g->orders()[0], 2u);
  EXPECT_EQ(g->orders()[1], 4u);
}

TEST(Characters, CountAndConductors) {
  auto chars = enumerate_characters(3, 2);
  ASSERT_EQ(chars.size(), 6u);
  EXPECT_TRUE(chars.front().is_trivial());
  std::size_t primitive = 0;
  for (const auto& c : chars) primitive += conductor(c) == 2;
  // phi(9) - phi(3)
  EXPECT_EQ(primitive, 4u);
}

TEST(Characters, MultiplicativeAndTrivialOnP) {
  for (const auto& c : enumerate_characters(7, 2)) {
    Complex a = c(Rational(3)), b = c(Rational(10)), ab = c(Rational(30));
    EXPECT_NEAR(std::abs(a * b - ab), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(c(Rational(7)) - 1.0), 0.0, 1e-12);
  }
}

TEST(AdditiveCharacter, FractionalPart) {
  auto [num, den] = p_fractional_part(Rational(7, 9), 3);
  EXPECT_EQ(num, 7u);
  EXPECT_EQ(den, 9u);
  Complex a = additive_character(Rational(1, 3), 3), b = additive_character(Rational(5, 9), 3);
  EXPECT_NEAR(std::abs(a * b - additive_character(Rational(8, 9), 3)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(additive_character(Rational(5), 3) - 1.0), 0.0, 1e-12);
}

TEST(GaussSum, ClosedFormMatchesBruteForce) {
  for (std::uint64_t p : {2, 3, 5})
    for (unsigned ell = 0; ell <= 2; ++ell)
      for (const auto& mu : enumerate_characters(p, ell))
        for (int v = -4; v <= 1; ++v) {
          Rational x = prime_power(p, v) * Rational(-1);
          EXPECT_NEAR(std::abs(gauss_sum_closed(x, mu) - gauss_sum_bruteforce(x, mu)), 0.0, 1e-9)
              << mu.to_string() << " v=" << v;
        }
}

TEST(GaussSum, UnramifiedValuesFrozen) {
  auto triv = ExtendedCharacter::trivial(3);
  // unit average: 1 at v(x) >= 0, -1/(q-1) at v(x) = -1, 0 below
  EXPECT_NEAR(gauss_sum_closed(Rational(1), triv).real(), 1.0, 1e-12);
  EXPECT_NEAR(gauss_sum_closed(Rational(1, 3), triv).real(), -0.5, 1e-12);
  EXPECT_NEAR(std::abs(gauss_sum_closed(Rational(1, 9), triv)), 0.0, 1e-12);
}

TEST(EpsilonFactor, UnitModulus) {
  for (std::uint64_t p : {2, 3, 5, 7})
    for (const auto& mu : enumerate_characters(p, 2)) EXPECT_NEAR(std::abs(epsilon_factor(mu).value), 1.0, 1e-9);
}

TEST(EpsilonFactor, QuadraticCharacterModThree) {
  // The Legendre symbol mod 3 has Gauss sum i sqrt 3, so eps = +-i.
  for (const auto& mu : enumerate_characters(3, 1))
    if (mu.is_ramified()) EXPECT_NEAR(std::abs(epsilon_factor(mu).value.real()), 0.0, 1e-12);
}

TEST(LFactor, UnramifiedAndRamified) {
  EXPECT_EQ(local_l_factor_inverse(ExtendedCharacter::trivial(5)).size(), 2u);
  for (const auto& mu : enumerate_characters(5, 1))
    if (mu.is_ramified()) EXPECT_EQ(local_l_factor_inverse(mu).size(), 1u);
}
