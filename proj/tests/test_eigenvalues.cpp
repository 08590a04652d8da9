#include <gtest/gtest.h>

#include <sstream>

#include "gl2sup/eigenvalues.hpp"

using namespace gl2sup;

TEST(Divisor, Counts) {
  EXPECT_EQ(divisor_count(1), 1u);
  EXPECT_EQ(divisor_count(12), 6u);
  EXPECT_EQ(divisor_count(1u << 20), 21u);
  EXPECT_EQ(divisor_count(999983), 2u);
}

TEST(Divisor, SieveAgreesWithTrialDivision) {
  DivisorEigenvalues d(5000);
  for (std::uint64_t n = 1; n <= 5000; n += 7) EXPECT_EQ(d.lambda(n).real(), static_cast<double>(divisor_count(n)));
  // beyond the sieve
  EXPECT_EQ(d.lambda(720720).real(), 240.0);
}

TEST(Table, ParsesAndLooksUp) {
  std::istringstream in("n,lambda_re,lambda_im\n1,1,0\n2,-0.5,0.25\n3,1e-3,0\n");
  auto t = TableEigenvalues::from_csv(in);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.lambda(2), std::complex<double>(-0.5, 0.25));
  EXPECT_DOUBLE_EQ(t.abs_lambda(2), std::abs(std::complex<double>(-0.5, 0.25)));
}

TEST(Table, MissingRowNamesFirstAbsentIndex) {
  std::vector<std::complex<double>> v(16, 1.0);
  TableEigenvalues t(v);
  try {
    t.lambda(400);
    FAIL();
  } catch (const MissingEigenvalue& e) {
    EXPECT_EQ(e.index(), 17u);
    EXPECT_EQ(e.requested(), 400u);
    EXPECT_NE(std::string(e.what()).find("17"), std::string::npos);
  }
}

TEST(Table, FormatErrorsCarryLine) {
  std::istringstream bad_header("n,re,im\n1,1,0\n");
  EXPECT_THROW(TableEigenvalues::from_csv(bad_header), EigenvalueFormatError);
  std::istringstream gap("n,lambda_re,lambda_im\n1,1,0\n3,1,0\n");
  try {
    TableEigenvalues::from_csv(gap);
    FAIL();
  } catch (const EigenvalueFormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream junk("n,lambda_re,lambda_im\n1,abc,0\n");
  EXPECT_THROW(TableEigenvalues::from_csv(junk), EigenvalueFormatError);
}
