// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <cmath>

#include "mramp/kernels.hpp"
#include "mramp/rng.hpp"

using namespace mramp;

namespace {

RowMatrix make_matrix(Index m, Index n) {
  RowMatrix a(m, n);
  kernels::parallel::fill_gaussian(a, 7, 1.0 / std::sqrt(static_cast<double>(m)));
  return a;
}

Vector make_vector(Index n, std::uint64_t seed) {
  CounterRng rng(seed, Purpose::test);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

template <void (*F)(const RowMatrix&, const Vector&, Vector&)>
void BM_gemv(benchmark::State& st) {
  const Index m = st.range(0), n = st.range(1);
  const RowMatrix a = make_matrix(m, n);
  const Vector x = make_vector(n, 1);
  Vector y;
  for (auto _ : st) {
    F(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(st.iterations() * m * n);
}

template <void (*F)(const RowMatrix&, const Vector&, Vector&)>
void BM_gemv_t(benchmark::State& st) {
  const Index m = st.range(0), n = st.range(1);
  const RowMatrix a = make_matrix(m, n);
  const Vector r = make_vector(m, 2);
  Vector out;
  for (auto _ : st) {
    F(a, r, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * m * n);
}

template <void (*F)(RowMatrix&, std::uint64_t, double)>
void BM_fill(benchmark::State& st) {
  RowMatrix a(st.range(0), st.range(1));
  for (auto _ : st) {
    F(a, 3, 1.0);
    benchmark::DoNotOptimize(a.data());
  }
  st.SetItemsProcessed(st.iterations() * a.size());
}

template <void (*F)(const Vector&, double, Vector&)>
void BM_soft_threshold(benchmark::State& st) {
  const Vector z = make_vector(st.range(0), 4);
  Vector out;
  for (auto _ : st) {
    F(z, 0.8, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * z.size());
}

template <void (*G)(const Matrix&, Matrix&, Matrix&), void (*D)(const Matrix&, const Matrix&, Matrix&)>
void BM_grad_div(benchmark::State& st) {
  const Index s = st.range(0);
  const Vector v = make_vector(s * s, 5);
  const Matrix x = Eigen::Map<const Matrix>(v.data(), s, s);
  Matrix gx, gy, out;
  for (auto _ : st) {
    G(x, gx, gy);
    D(gx, gy, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * s * s);
}

}  // namespace

// 1638 x 16384: a 128x128 image at delta = 10%
BENCHMARK(BM_gemv<kernels::serial::gemv>)->Name("gemv/serial")->Args({800, 2000})->Args({1638, 16384});
BENCHMARK(BM_gemv<kernels::parallel::gemv>)->Name("gemv/parallel")->Args({800, 2000})->Args({1638, 16384});
BENCHMARK(BM_gemv_t<kernels::serial::gemv_t>)->Name("gemv_t/serial")->Args({800, 2000})->Args({1638, 16384});
BENCHMARK(BM_gemv_t<kernels::parallel::gemv_t>)->Name("gemv_t/parallel")->Args({800, 2000})->Args({1638, 16384});
BENCHMARK(BM_fill<kernels::serial::fill_gaussian>)->Name("fill_gaussian/serial")->Args({800, 2000});
BENCHMARK(BM_fill<kernels::parallel::fill_gaussian>)->Name("fill_gaussian/parallel")->Args({800, 2000});
BENCHMARK(BM_soft_threshold<kernels::serial::soft_threshold>)->Name("soft_threshold/serial")->Arg(1 << 14)->Arg(1 << 20);
BENCHMARK(BM_soft_threshold<kernels::parallel::soft_threshold>)->Name("soft_threshold/parallel")->Arg(1 << 14)->Arg(1 << 20);
BENCHMARK(BM_grad_div<kernels::serial::gradient, kernels::serial::divergence>)->Name("grad_div/serial")->Arg(128)->Arg(512);
BENCHMARK(BM_grad_div<kernels::parallel::gradient, kernels::parallel::divergence>)->Name("grad_div/parallel")->Arg(128)->Arg(512);

BENCHMARK_MAIN();
