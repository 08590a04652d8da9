#include <gtest/gtest.h>

#include "gl2sup/global_spec.hpp"

using namespace gl2sup;

TEST(Spec, LoadsSampleFiles) {
  auto s = load_spec(std::string(GL2SUP_TEST_DATA) + "/mixed_675.json");
  EXPECT_EQ(s.N, 675u);
  EXPECT_EQ(s.C, 135u);
  ASSERT_EQ(s.primes.size(), 2u);
  EXPECT_TRUE(s.primes[0].high());
  EXPECT_FALSE(s.primes[1].high());
  EXPECT_FALSE(s.maximally_ramified());
}

TEST(Spec, MaassAndLambdaFile) {
  auto s = load_spec(std::string(GL2SUP_TEST_DATA) + "/n9_maass.json");
  EXPECT_EQ(s.delta, Rational(7, 64));
  EXPECT_EQ(s.arch.kind, ArchimedeanType::Kind::Principal);
  auto t = load_spec(std::string(GL2SUP_TEST_DATA) + "/n9_lambda16.json");
  ASSERT_TRUE(t.lambda_file.has_value());
  EXPECT_NE(t.lambda_file->find("lambda16.csv"), std::string::npos);
}

TEST(Spec, MalformedJsonReportsPosition) {
  try {
    load_spec(std::string(GL2SUP_TEST_DATA) + "/malformed.json");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(Spec, RejectsBadContent) {
  EXPECT_THROW(parse_spec(R"({"level": [[4, 2]]})"), InputError);
  EXPECT_THROW(parse_spec(R"({"level": [[3, 2]], "central_conductor": [[5, 1]]})"), InputError);
  EXPECT_THROW(parse_spec(R"({"level": [[3, 2]], "bogus": 1})"), InputError);
  EXPECT_THROW(parse_spec(R"({"level": [[3, 2]], "central_conductor": [[3, 2]], "delta": "1/2"})"), InputError);
  EXPECT_THROW(parse_spec(R"({"level": [[3, 2]], "central_conductor": [[3, 2]], "config": {"smax": 10}})"),
               InputError);
  // c = 2 > n/2 at p = 3 with n = 3 needs a supported regime; c = 3, n = 3 is fine
  EXPECT_NO_THROW(parse_spec(R"({"level": [[3, 3]], "central_conductor": [[3, 3]]})"));
}

TEST(Spec, LowPrimesCarryConstants) {
  auto s = parse_spec(R"({"level": [[3, 2], [5, 2]], "central_conductor": [[3, 2]],
                          "locals": {"5": {"l2_constant": 2.5}}})");
  EXPECT_FALSE(s.find(5)->high());
  EXPECT_DOUBLE_EQ(s.find(5)->l2_constant, 2.5);
  EXPECT_EQ(s.find(7), nullptr);
}

TEST(Spec, RationalParsing) {
  EXPECT_EQ(parse_rational("7/64"), Rational(7, 64));
  EXPECT_THROW(parse_rational("x"), InputError);
  EXPECT_THROW(parse_rational("1/0"), InputError);
}
