// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gl2sup/arch_whittaker.hpp"
#include "gl2sup/bessel.hpp"
#include "gl2sup/characters.hpp"
#include "gl2sup/cosets.hpp"
#include "gl2sup/eigenvalues.hpp"
#include "gl2sup/global_assembly.hpp"
#include "gl2sup/global_spec.hpp"
#include "gl2sup/local_newform.hpp"

using namespace gl2sup;

#ifndef GL2SUP_TEST_DATA
#define GL2SUP_TEST_DATA "tests/data"
#endif

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string data(const std::string& name) { return std::string(GL2SUP_TEST_DATA) + "/" + name; }

template <class... A>
std::string format(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// Units used as x = p^v u: 1, -1 and a primitive root.
std::vector<long> sample_units(std::uint64_t p) {
  long g = p == 2 ? 5 : static_cast<long>(smallest_primitive_root_mod_p2(p));
  return {1, -1, g};
}

Outcome gauss_equivalence() {
  double worst = 0.0;
  std::size_t points = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t p : {2, 3, 5, 7})
    for (unsigned ell = 0; ell <= 3; ++ell)
      for (const auto& mu : enumerate_characters(p, ell)) {
        EpsilonDatum eps = epsilon_factor(mu.inverse());
        for (int v = -5; v <= 2; ++v)
          for (long u : sample_units(p)) {
            Rational x = prime_power(p, v) * Rational(u);
            Complex closed = gauss_sum_closed(x, mu, mu.is_ramified() ? &eps : nullptr);
            Complex brute = gauss_sum_bruteforce(x, mu);
            worst = std::max(worst, std::abs(closed - brute));
            ++points;
          }
      }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-9 && secs < 30.0,
          format("%zu points, max |closed - brute| = %.3g, %.1f s", points, worst, secs)};
}

Outcome epsilon_modulus() {
  double worst = 0.0;
  std::size_t count = 0;
  for (std::uint64_t p : {2, 3, 5, 7})
    for (unsigned ell = 0; ell <= 3; ++ell)
      for (const auto& mu : enumerate_characters(p, ell)) {
        worst = std::max(worst, std::abs(std::abs(epsilon_factor(mu).value) - 1.0));
        ++count;
      }
  return {worst <= 1e-9, format("%zu characters, max ||eps| - 1| = %.3g", count, worst)};
}

Outcome coset_decomposition() {
  std::size_t samples = 0, bad_witness = 0, pairs = 0, overlaps = 0, mirrors = 0, bad_mirror = 0;
  for (std::uint64_t p : {2, 3, 5})
    for (int n = 1; n <= 4; ++n) {
      std::mt19937_64 rng(1000 * p + n);
      for (int i = 0; i < 500; ++i) {
        LocalMatrix g = random_gl2(p, rng);
        ++samples;
        try {
          auto r = reduce_to_triple(g, n);
          const auto& w = r.witness;
          LocalMatrix rebuilt =
              LocalMatrix::z(p, w.zeta) * LocalMatrix::n(p, w.x) * representative(p, r.triple) * w.k;
          if (!(rebuilt == g) || !in_k1(w.k, n)) ++bad_witness;
        } catch (const std::exception&) {
          ++bad_witness;
        }
      }
      auto cover = verify_disjoint_cover(p, n, 0, 1, -6, 2);
      pairs += cover.pairs_checked;
      overlaps += cover.overlaps;
      for (int m = -6; m <= 2; ++m)
        for (const auto& t : canonical_index_set(p, n, m)) {
          ++mirrors;
          try {
            mirror(p, t);
          } catch (const std::logic_error&) {
            ++bad_mirror;
          }
        }
    }
  bool ok = bad_witness == 0 && overlaps == 0 && bad_mirror == 0;
  return {ok, format("%zu witnesses (%zu bad), %zu pairs (%zu overlaps), %zu mirror identities (%zu bad)", samples,
                     bad_witness, pairs, overlaps, mirrors, bad_mirror)};
}

const std::vector<std::tuple<int, int, int>> kLocalReps{{3, 2, 0}, {5, 2, 0}, {3, 3, 0},
                                                         {3, 2, 1}, {5, 2, 1}, {3, 3, 1}};

Outcome local_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t points = 0, mism = 0, bounds = 0;
  double worst = 0.0;
  for (auto [p, a1, a2] : kLocalReps) {
    auto rep = make_principal_series(p, a1, a2);
    WhittakerOracle o(rep);
    int n = rep.n();
    auto c = compare_with_closed_form(o, -n - n / 2, 3, 1e-8);
    points += c.points;
    mism += c.mismatches;
    bounds += c.bound_checked;
    worst = std::max(worst, c.max_abs_error);
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {mism == 0 && bounds > 0 && secs < 120.0,
          format("%zu points, %zu bound checks, %zu mismatches, max error %.3g, %.1f s", points, bounds, mism, worst,
                 secs)};
}

Outcome alpha_unit() {
  double worst = 0.0;
  for (auto [p, a1, a2] : kLocalReps) {
    auto rep = make_principal_series(p, a1, a2);
    WhittakerOracle pi(rep), pi_tilde(rep.contragredient());
    auto a = alpha_modulus(pi, pi_tilde, -rep.n() - 4, 2);
    if (a.nonvanishing == 0) return {false, "no nonvanishing point for " + rep.to_string()};
    worst = std::max({worst, std::abs(a.alpha - 1.0), a.max_deviation});
  }
  return {worst <= 1e-8, format("max ||alpha| - 1| = %.3g over %zu representations", worst, kLocalReps.size())};
}

const std::vector<std::string> kSupportSpecs{"n9.json", "n25.json", "n27.json", "n49.json", "n225.json",
                                             "mixed_675.json"};

Outcome support_exact() {
  std::size_t checked = 0, inexact = 0, support = 0;
  for (const auto& name : kSupportSpecs) {
    GlobalContext ctx(load_spec(data(name)));
    for (const auto& pt : enumerate_domain_points(ctx.spec())) {
      auto c = compare_support(ctx, pt, 10000);
      ++checked;
      support += c.brute;
      if (!c.exact()) ++inexact;
    }
  }
  return {inexact == 0, format("%zu points over %zu specs, %zu support elements, %zu inexact", checked,
                               kSupportSpecs.size(), support, inexact)};
}

Outcome bessel_accuracy() {
  using cd = std::complex<double>;
  double worst = 0.0;
  for (cd nu : {cd(0.0), cd(0.25), cd(0.5), cd(0, 0.3), cd(0.5, 0.2)})
    for (int i = 0; i < 60; ++i) {
      double u = 0.05 * std::pow(30.0 / 0.05, i / 59.0);
      cd a = bessel_k(nu, u), b = bessel_k_quadrature(nu, u);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
  double half = 0.0;
  for (double u : {0.05, 0.5, 1.0, 2.0, 7.0, 30.0}) {
    double exact = std::sqrt(std::numbers::pi / (2.0 * u)) * std::exp(-u);
    half = std::max(half, std::abs(bessel_k(0.5, u).real() - exact) / exact);
  }
  return {worst <= 1e-6 && half <= 1e-8, format("max rel error %.3g, K_1/2 closed form %.3g", worst, half)};
}

Outcome majorant_exactness() {
  DivisorEigenvalues lambda;
  std::size_t checked = 0;
  double worst = 0.0;
  for (const auto& name : kSupportSpecs) {
    GlobalContext ctx(load_spec(data(name)));
    auto trunc = default_truncation(ctx.spec());
    for (const auto& pt : enumerate_domain_points(ctx.spec())) {
      auto a = majorant_sum(ctx, pt, lambda, trunc);
      auto b = majorant_sum_flat(ctx, pt, lambda, trunc);
      worst = std::max(worst, std::abs(a.value - b.value) / std::max(1.0, std::abs(b.value)));
      ++checked;
    }
  }
  return {worst <= 1e-9, format("%zu points, max relative difference %.3g", checked, worst)};
}

Outcome theorem_shape() {
  auto t0 = std::chrono::steady_clock::now();
  DivisorEigenvalues lambda;
  std::vector<double> ratios;
  std::size_t above = 0, points = 0;
  for (const char* name : {"n9.json", "n81.json", "n729.json"}) {
    NewformSpecGlobal spec = load_spec(data(name));
    GlobalContext ctx(spec);
    auto trunc = default_truncation(spec);
    double cap = theorem_comparators(spec).trivial_upper * std::pow(static_cast<double>(spec.N), 0.05);
    double worst = 0.0;
    for (const auto& pt : sample_domain_points(spec, spec.config.max_points, spec.config.seed)) {
      auto prof = ramification_profile(spec, pt);
      double m = majorant_sum(ctx, pt, lambda, trunc).value;
      worst = std::max(worst, m / (std::sqrt(static_cast<double>(prof.L)) + std::sqrt(static_cast<double>(prof.N2))));
      if (!(m < cap)) ++above;
      ++points;
    }
    ratios.push_back(worst);
  }
  double lo = *std::min_element(ratios.begin(), ratios.end());
  double hi = *std::max_element(ratios.begin(), ratios.end());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = std::isfinite(hi) && lo > 0 && hi / lo <= 4.0 && above == 0 && secs < 600.0;
  return {ok, format("ratios %.4g %.4g %.4g (spread %.3g), %zu/%zu points above trivial*N^0.05, %.1f s", ratios[0],
                     ratios[1], ratios[2], hi / lo, above, points, secs)};
}

Outcome comparator_identity() {
  std::size_t checked = 0, bad = 0;
  double worst = 0.0;
  for (const char* name : {"n9.json", "n25.json", "n49.json", "n81.json", "n225.json", "n729.json", "n9_maass.json"}) {
    NewformSpecGlobal spec = load_spec(data(name));
    auto c = theorem_comparators(spec);
    ++checked;
    if (!c.lower_exponents) {
      ++bad;
      continue;
    }
    Rational r = spec.delta + 2 * spec.config.epsilon;
    if (exponent_difference(c.upper_exponents, *c.lower_exponents) != level_power(spec, r)) ++bad;
    double expect = std::pow(static_cast<double>(spec.N), r.get_d());
    worst = std::max(worst, std::abs(c.upper / *c.lower - expect) / expect);
  }
  return {bad == 0, format("%zu square levels, %zu exponent mismatches (float check %.2g)", checked, bad, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"gauss-sum closed form equals brute force", gauss_equivalence},
      {"epsilon factors have unit modulus", epsilon_modulus},
      {"coset decomposition, disjointness and mirror identity", coset_decomposition},
      {"local oracle matches the closed-form tables", local_oracle},
      {"|alpha| = 1", alpha_unit},
      {"support progressions equal the brute-force support", support_exact},
      {"K-Bessel fast path vs quadrature", bessel_accuracy},
      {"indexed majorant equals the flat sum", majorant_exactness},
      {"theorem-shape ratio is stable across 9, 81, 729", theorem_shape},
      {"upper/lower = N^(delta + 2 eps) for square N = C", comparator_identity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}
