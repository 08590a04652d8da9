#include "gl2sup/arch_whittaker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gl2sup/bessel.hpp"

namespace gl2sup {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTol = 1e-12;

using cd = std::complex<double>;

double sgn(double y) { return y > 0 ? 1.0 : -1.0; }

}  // namespace

ArchimedeanType ArchimedeanType::principal(cd s1, cd s2, int m1, int m2) {
  ArchimedeanType t{Kind::Principal, s1, s2, m1, m2};
  t.validate();
  return t;
}

ArchimedeanType ArchimedeanType::discrete(cd s1, cd s2, int m1, int m2) {
  ArchimedeanType t{Kind::Discrete, s1, s2, m1, m2};
  t.validate();
  return t;
}

ArchimedeanType ArchimedeanType::holomorphic(int k) {
  if (k < 2) throw std::invalid_argument("holomorphic weight must be >= 2");
  double h = 0.5 * (k - 1);
  return discrete(h, -h, k % 2, 0);
}

void ArchimedeanType::validate() const {
  if (!(0 <= m2 && m2 <= m1 && m1 <= 1)) throw std::invalid_argument("archimedean type: need 0 <= m2 <= m1 <= 1");
  if (std::abs((s1 + s2).real()) > kTol) throw std::invalid_argument("archimedean type: s1 + s2 must be imaginary");
  cd d = s1 - s2;
  if (kind == Kind::Principal) {
    bool imaginary = std::abs(d.real()) <= kTol;
    bool real_small = std::abs(d.imag()) <= kTol && std::abs(d.real()) < 1.0;
    if (!imaginary && !real_small)
      throw std::invalid_argument("archimedean type: s1 - s2 must lie in iR or (-1, 1)");
  } else {
    double k = std::round(d.real());
    if (std::abs(d.imag()) > kTol || std::abs(d.real() - k) > kTol || k < 1)
      throw std::invalid_argument("archimedean type: s1 - s2 must be a positive integer");
    int parity = static_cast<int>(k) % 2;
    if (parity != ((m1 - m2 + 1) % 2 + 2) % 2)
      throw std::invalid_argument("archimedean type: s1 - s2 has the wrong parity");
  }
}

std::string ArchimedeanType::to_string() const {
  std::ostringstream os;
  os << (kind == Kind::Principal ? "principal" : "discrete") << "(s1=" << s1 << ", s2=" << s2 << ", m1=" << m1
     << ", m2=" << m2 << ")";
  return os.str();
}

cd kappa(const ArchimedeanType& t, double y) {
  if (y == 0.0) throw std::domain_error("kappa: y must be nonzero");
  double ay = std::abs(y);
  cd center = std::pow(ay, 0.5 * (t.s1 + t.s2));
  cd d = t.s1 - t.s2;
  if (t.kind == ArchimedeanType::Kind::Discrete) {
    if (y < 0) return 0.0;
    return center * std::pow(y, 0.5 * (d + 1.0)) * 2.0 * std::exp(-kTwoPi * y);
  }
  double x = kTwoPi * ay;
  if (t.m1 == t.m2) {
    double s = t.m1 == 1 ? sgn(y) : 1.0;
    return s * center * std::sqrt(ay) * bessel_k(0.5 * d, x);
  }
  return center * ay * (bessel_k(0.5 * (d - 1.0), x) + sgn(y) * bessel_k(0.5 * (d + 1.0), x));
}

double log_abs_kappa(const ArchimedeanType& t, double y) {
  if (y == 0.0) throw std::domain_error("kappa: y must be nonzero");
  double ay = std::abs(y);
  double log_center = 0.5 * (t.s1 + t.s2).real() * std::log(ay);
  cd d = t.s1 - t.s2;
  if (t.kind == ArchimedeanType::Kind::Discrete) {
    if (y < 0) return -std::numeric_limits<double>::infinity();
    return log_center + 0.5 * (d.real() + 1.0) * std::log(ay) + std::log(2.0) - kTwoPi * ay;
  }
  double x = kTwoPi * ay;
  double mag;
  if (t.m1 == t.m2) {
    mag = std::sqrt(ay) * std::abs(bessel_k_scaled(0.5 * d, x));
  } else {
    mag = ay * std::abs(bessel_k_scaled(0.5 * (d - 1.0), x) + sgn(y) * bessel_k_scaled(0.5 * (d + 1.0), x));
  }
  if (mag == 0.0) return -std::numeric_limits<double>::infinity();
  return log_center + std::log(mag) - x;
}

double kappa_envelope(const ArchimedeanType& t, double y) {
  double ay = std::abs(y);
  if (kTwoPi * ay < 1.0) throw std::domain_error("kappa_envelope: needs 2 pi |y| >= 1");
  double decay = std::exp(-kTwoPi * ay);
  if (t.kind == ArchimedeanType::Kind::Discrete) {
    if (y < 0) return 0.0;
    return 2.0 * std::pow(ay, 0.5 * ((t.s1 - t.s2).real() + 1.0)) * decay;
  }
  // |K_nu(x)| <= K_{|Re nu|}(x), monotone in the order
  if (t.m1 == t.m2) return 0.5 * decay;
  return std::sqrt(ay) * (1.0 + 1.0 / (2.0 * kTwoPi * ay)) * decay;
}

namespace {

double fitted_constant(const ArchimedeanType& t, double eps, double lo, double hi, std::size_t points) {
  double best = 0.0;
  double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i) {
    double y = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    for (double s : {1.0, -1.0}) {
      double l = log_abs_kappa(t, s * y);
      if (!std::isfinite(l)) continue;
      double c = std::exp(l + eps * std::log(y) + (kTwoPi - eps) * y);
      best = std::max(best, c);
    }
  }
  return best;
}

}  // namespace

DecayReport decay_majorant_check(const ArchimedeanType& type, double epsilon, double y_min, double y_max,
                                 std::size_t points) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw std::invalid_argument("decay_majorant_check: eps must be in (0, 1/2]");
  if (!(y_min > 0.0 && y_max > y_min) || points < 2) throw std::invalid_argument("decay_majorant_check: bad grid");
  DecayReport r;
  r.epsilon = epsilon;
  r.grid_points = points;
  r.constant_coarse = fitted_constant(type, epsilon, y_min, y_max, points);
  r.constant_fine = fitted_constant(type, epsilon, y_min, y_max, 2 * points - 1);
  r.tail_constant = fitted_constant(type, epsilon, std::max(10.0, y_min), y_max, points);
  bool finite = std::isfinite(r.constant_coarse) && std::isfinite(r.constant_fine) && r.constant_coarse > 0.0;
  r.ok = finite && std::abs(r.constant_fine - r.constant_coarse) <= 0.1 * r.constant_coarse &&
         std::isfinite(r.tail_constant);
  return r;
}

}  // namespace gl2sup
