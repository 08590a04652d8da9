#include <benchmark/benchmark.h>

#include "gl2sup/bessel.hpp"
#include "gl2sup/characters.hpp"
#include "gl2sup/eigenvalues.hpp"
#include "gl2sup/global_assembly.hpp"
#include "gl2sup/global_spec.hpp"
#include "gl2sup/local_newform.hpp"

using namespace gl2sup;

static void BM_GaussClosed(benchmark::State& state) {
  auto chars = enumerate_characters(7, 3);
  std::vector<EpsilonDatum> eps;
  for (const auto& c : chars) eps.push_back(epsilon_factor(c.inverse()));
  Rational x = prime_power(7, -3) * Rational(3);
  for (auto _ : state)
    for (std::size_t i = 0; i < chars.size(); ++i)
      benchmark::DoNotOptimize(gauss_sum_closed(x, chars[i], chars[i].is_ramified() ? &eps[i] : nullptr));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(chars.size()));
}
BENCHMARK(BM_GaussClosed);

static void BM_GaussBruteForce(benchmark::State& state) {
  auto chars = enumerate_characters(7, 3);
  Rational x = prime_power(7, -3) * Rational(3);
  for (auto _ : state)
    for (const auto& c : chars) benchmark::DoNotOptimize(gauss_sum_bruteforce(x, c));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(chars.size()));
}
BENCHMARK(BM_GaussBruteForce);

static void BM_SolveBasicIdentity(benchmark::State& state) {
  auto rep = make_principal_series(3, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  auto chars = enumerate_characters(3, 1);
  for (auto _ : state)
    for (const auto& mu : chars) benchmark::DoNotOptimize(solve_basic_identity(rep, 1, mu));
}
BENCHMARK(BM_SolveBasicIdentity)->Args({2, 0})->Args({3, 1})->Args({4, 0});

static void BM_Oracle(benchmark::State& state) {
  auto rep = make_principal_series(3, static_cast<int>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(WhittakerOracle(rep));
}
BENCHMARK(BM_Oracle)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_BesselFast(benchmark::State& state) {
  double u = static_cast<double>(state.range(0)) / 10.0;
  std::complex<double> nu(0.25, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(bessel_k(nu, u));
}
BENCHMARK(BM_BesselFast)->Arg(5)->Arg(30)->Arg(100)->Arg(400);

static void BM_BesselQuadrature(benchmark::State& state) {
  double u = static_cast<double>(state.range(0)) / 10.0;
  std::complex<double> nu(0.25, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(bessel_k_quadrature(nu, u));
}
BENCHMARK(BM_BesselQuadrature)->Arg(5)->Arg(30)->Arg(100)->Arg(400);

static void BM_Majorant(benchmark::State& state) {
  const char* names[] = {"n9.json", "n81.json", "n729.json", "mixed_675.json"};
  auto spec = load_spec(std::string(GL2SUP_TEST_DATA) + "/" + names[state.range(0)]);
  GlobalContext ctx(spec);
  DivisorEigenvalues lambda;
  auto pts = sample_domain_points(spec, 8, 0);
  auto tr = default_truncation(spec);
  for (auto _ : state)
    for (const auto& p : pts) benchmark::DoNotOptimize(majorant_sum(ctx, p, lambda, tr));
  state.SetLabel(names[state.range(0)]);
}
BENCHMARK(BM_Majorant)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
