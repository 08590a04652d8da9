#pragma once

#include <complex>

namespace gl2sup {

// K_nu(u) for complex order with |Re nu| <= 1 and u > 0.
std::complex<double> bessel_k(std::complex<double> nu, double u);
// e^u K_nu(u), same route as bessel_k but without the underflow.
std::complex<double> bessel_k_scaled(std::complex<double> nu, double u);

// Reference value from the integral int_0^inf e^{-u cosh t} cosh(nu t) dt,
// evaluated by double-exponential quadrature. Scaled by e^u.
std::complex<double> bessel_k_quadrature_scaled(std::complex<double> nu, double u);
std::complex<double> bessel_k_quadrature(std::complex<double> nu, double u);

namespace detail {

// Pair (K_mu, K_{mu+1}) scaled by e^u, for |Re mu| <= 1/2.
struct BesselPair {
  std::complex<double> k_mu;
  std::complex<double> k_mu1;
};

BesselPair temme_series_scaled(std::complex<double> mu, double u);
BesselPair steed_cf2_scaled(std::complex<double> mu, double u);
std::complex<double> i_series_scaled(std::complex<double> nu, double u);
std::complex<double> asymptotic_scaled(std::complex<double> nu, double u);
std::complex<double> rgamma(std::complex<double> z);

}  // namespace detail

}  // namespace gl2sup
