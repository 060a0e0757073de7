// Parallel kernels against the serial reference versions.

#include <benchmark/benchmark.h>

#include <random>

#include "cencov/algebra.hpp"
#include "cencov/gns.hpp"
#include "cencov/reference.hpp"

using namespace cencov;

namespace {

ComplexMatrix random_matrix(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  ComplexMatrix m(n, n);
  for (auto& z : m.data()) z = {d(rng), d(rng)};
  return m;
}

AlgebraElement random_element(const GroupoidPtr& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  AlgebraElement a = AlgebraElement::zero(g);
  for (auto& z : a.coeff) z = {d(rng), d(rng)};
  return a;
}

State mixed_state(std::size_t n) {
  return state_from_density(ComplexMatrix::identity(n) * cplx(1.0 / static_cast<double>(n)), pair_groupoid(n));
}

void BM_Matmul(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const ComplexMatrix a = random_matrix(n, 1), b = random_matrix(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(matmul(a, b));
}

void BM_MatmulSerial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const ComplexMatrix a = random_matrix(n, 1), b = random_matrix(n, 2);
  for (auto _ : st) benchmark::DoNotOptimize(reference::matmul(a, b));
}

void BM_Convolve(benchmark::State& st) {
  const auto g = pair_groupoid(static_cast<std::size_t>(st.range(0)));
  const auto a = random_element(g, 3), b = random_element(g, 4);
  for (auto _ : st) benchmark::DoNotOptimize(convolve(a, b));
}

void BM_ConvolveSerial(benchmark::State& st) {
  const auto g = pair_groupoid(static_cast<std::size_t>(st.range(0)));
  const auto a = random_element(g, 3), b = random_element(g, 4);
  for (auto _ : st) benchmark::DoNotOptimize(reference::convolve(a, b));
}

void BM_Gram(benchmark::State& st) {
  const State rho = mixed_state(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(gns_gram(rho));
}

void BM_GramSerial(benchmark::State& st) {
  const State rho = mixed_state(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::gns_gram(rho));
}

}  // namespace

BENCHMARK(BM_Matmul)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_MatmulSerial)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_Convolve)->Arg(8)->Arg(16);
BENCHMARK(BM_ConvolveSerial)->Arg(8)->Arg(16);
BENCHMARK(BM_Gram)->Arg(3)->Arg(4);
BENCHMARK(BM_GramSerial)->Arg(3)->Arg(4);

BENCHMARK_MAIN();
