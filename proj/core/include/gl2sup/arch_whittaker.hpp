#pragma once

#include <complex>
#include <string>
#include <vector>

namespace gl2sup {

struct ArchimedeanType {
  enum class Kind { Principal, Discrete };
  Kind kind = Kind::Principal;
  std::complex<double> s1 = 0.0;
  std::complex<double> s2 = 0.0;
  int m1 = 0;
  int m2 = 0;

  static ArchimedeanType principal(std::complex<double> s1, std::complex<double> s2, int m1 = 0, int m2 = 0);
  static ArchimedeanType discrete(std::complex<double> s1, std::complex<double> s2, int m1, int m2);
  // Holomorphic weight k: s1 = (k-1)/2 = -s2, m1 - m2 = k mod 2.
  static ArchimedeanType holomorphic(int k);

  // Throws std::invalid_argument when the parameters violate the
  // unitarity/parity constraints.
  void validate() const;
  std::string to_string() const;
};

// Lowest weight vector: W(n(x)a(y)) = e(x) kappa(y).
std::complex<double> kappa(const ArchimedeanType& type, double y);
double log_abs_kappa(const ArchimedeanType& type, double y);

// A rigorous upper bound for |kappa(y)| valid for 2 pi |y| >= 1.
double kappa_envelope(const ArchimedeanType& type, double y);

struct DecayReport {
  double epsilon = 0.1;
  double constant_coarse = 0.0;
  double constant_fine = 0.0;
  double tail_constant = 0.0;  // sup on [10, 50]
  std::size_t grid_points = 0;
  bool ok = false;
};

// Smallest C on a log grid of |y| in [y_min, y_max] (both signs) with
// |kappa(y)| <= C |y|^{-eps} e^{(-2 pi + eps)|y|}; stable if refining the grid
// by a factor of two moves C by at most 10%.
DecayReport decay_majorant_check(const ArchimedeanType& type, double epsilon = 0.1, double y_min = 1e-3,
                                 double y_max = 50.0, std::size_t points = 400);

}  // namespace gl2sup
