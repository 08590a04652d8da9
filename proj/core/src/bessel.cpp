#include "gl2sup/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace gl2sup {

using cd = std::complex<double>;

namespace detail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;

// 1/Gamma(1+z) = sum c_k z^k
constexpr double kRGammaTaylor[] = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
};

constexpr double kLanczos[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                               771.32342877765313,   -176.61502916214059,   12.507343278686905,
                               -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

cd rgamma(cd z) {
  if (z.real() < 0.5) {
    // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
    return std::sin(kPi * z) / (kPi * rgamma(1.0 - z));
  }
  z -= 1.0;
  cd x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  cd t = z + 7.5;
  cd gamma = std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
  return 1.0 / gamma;
}

BesselPair temme_series_scaled(cd mu, double x) {
  // gam2 = even part of 1/Gamma(1+mu), gam1 = -(odd part)/mu
  cd gam1 = 0.0, gam2 = 0.0, m2 = mu * mu, pw = 1.0;
  for (std::size_t k = 0; k < std::size(kRGammaTaylor); k += 2) {
    gam2 += kRGammaTaylor[k] * pw;
    if (k + 1 < std::size(kRGammaTaylor)) gam1 -= kRGammaTaylor[k + 1] * pw;
    pw *= m2;
  }
  cd gampl = gam2 - mu * gam1;  // 1/Gamma(1+mu)
  cd gammi = gam2 + mu * gam1;  // 1/Gamma(1-mu)

  double x2 = 0.5 * x;
  cd pimu = kPi * mu;
  cd fact = std::abs(pimu) < kEps ? cd(1.0) : pimu / std::sin(pimu);
  double d = -std::log(x2);
  cd e = mu * d;
  cd fact2 = std::abs(e) < kEps ? cd(1.0) : std::sinh(e) / e;
  cd ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
  cd sum = ff;
  cd ee = std::exp(e);
  cd p = 0.5 * ee / gampl;
  cd q = 0.5 / (ee * gammi);
  cd c = 1.0;
  double dd = x2 * x2;
  cd sum1 = p;
  for (int i = 1; i < 500; ++i) {
    double fi = static_cast<double>(i);
    ff = (fi * ff + p + q) / (fi * fi - mu * mu);
    c *= dd / fi;
    p /= (fi - mu);
    q /= (fi + mu);
    cd del = c * ff;
    sum += del;
    cd del1 = c * (p - fi * ff);
    sum1 += del1;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  double scale = std::exp(x);
  return {sum * scale, sum1 * (2.0 / x) * scale};
}

BesselPair steed_cf2_scaled(cd mu, double x) {
  cd b = 2.0 * (1.0 + x);
  cd d = 1.0 / b;
  cd h = d, delh = d;
  cd q1 = 0.0, q2 = 1.0;
  cd a1 = 0.25 - mu * mu;
  cd q = a1, c = a1;
  cd a = -a1;
  cd s = 1.0 + q * delh;
  for (int i = 2; i < 100000; ++i) {
    double fi = static_cast<double>(i);
    a -= 2.0 * (fi - 1.0);
    c = -a * c / fi;
    cd qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    cd dels = q * delh;
    s += dels;
    if (std::abs(dels) < std::abs(s) * kEps) break;
  }
  h = a1 * h;
  cd kmu = std::sqrt(kPi / (2.0 * x)) / s;
  cd k1 = kmu * (mu + x + 0.5 - h) / x;
  return {kmu, k1};
}

cd i_series_scaled(cd nu, double x) {
  auto bessel_i = [x](cd v) {
    cd term = std::pow(cd(0.5 * x), v) * rgamma(v + 1.0);
    cd sum = term;
    double y = 0.25 * x * x;
    for (int k = 1; k < 500; ++k) {
      term *= y / (static_cast<double>(k) * (v + static_cast<double>(k)));
      sum += term;
      if (std::abs(term) < kEps * std::abs(sum)) break;
    }
    return sum;
  };
  cd k = 0.5 * kPi * (bessel_i(-nu) - bessel_i(nu)) / std::sin(kPi * nu);
  return k * std::exp(x);
}

cd asymptotic_scaled(cd nu, double x) {
  cd mu4 = 4.0 * nu * nu;
  cd term = 1.0, sum = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    double odd = 2.0 * k - 1.0;
    term *= (mu4 - odd * odd) / (8.0 * k * x);
    double t = std::abs(term);
    if (t > prev) break;
    sum += term;
    prev = t;
    if (t < kEps * std::abs(sum)) break;
  }
  return std::sqrt(kPi / (2.0 * x)) * sum;
}

}  // namespace detail

namespace {

void check_arguments(cd nu, double u) {
  if (!(u > 0.0)) throw std::domain_error("bessel_k: argument must be positive");
  if (std::abs(nu.real()) > 1.0 + 1e-12) throw std::invalid_argument("bessel_k: |Re nu| must be <= 1");
}

}  // namespace

cd bessel_k_scaled(cd nu, double u) {
  check_arguments(nu, u);
  if (nu.real() < 0.0) nu = -nu;
  if (u >= 30.0) return detail::asymptotic_scaled(nu, u);
  if (u < 2.0 && std::abs(nu.imag()) > 0.75) return detail::i_series_scaled(nu, u);
  bool shifted = nu.real() > 0.5;
  cd mu = shifted ? nu - 1.0 : nu;
  detail::BesselPair pr = u < 2.0 ? detail::temme_series_scaled(mu, u) : detail::steed_cf2_scaled(mu, u);
  return shifted ? pr.k_mu1 : pr.k_mu;
}

cd bessel_k(cd nu, double u) { return bessel_k_scaled(nu, u) * std::exp(-u); }

cd bessel_k_quadrature_scaled(cd nu, double u) {
  check_arguments(nu, u);
  double a = nu.real(), b = nu.imag();
  boost::math::quadrature::exp_sinh<double> integrator;
  const double tol = 1e-13;
  auto re = [=](double t) {
    double w = std::exp(-u * (std::cosh(t) - 1.0));
    return w == 0.0 ? 0.0 : w * std::cosh(a * t) * std::cos(b * t);
  };
  auto im = [=](double t) {
    double w = std::exp(-u * (std::cosh(t) - 1.0));
    return w == 0.0 ? 0.0 : w * std::sinh(a * t) * std::sin(b * t);
  };
  double r = integrator.integrate(re, tol);
  double i = (a == 0.0 || b == 0.0) ? 0.0 : integrator.integrate(im, tol);
  return {r, i};
}

cd bessel_k_quadrature(cd nu, double u) { return bessel_k_quadrature_scaled(nu, u) * std::exp(-u); }

}  // namespace gl2sup
