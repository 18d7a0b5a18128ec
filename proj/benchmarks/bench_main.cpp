#include <benchmark/benchmark.h>

#include "carath/herglotz.hpp"
#include "carath/kernel.hpp"
#include "carath/operator_core.hpp"
#include "carath/stieltjes.hpp"

using namespace carath;

static void BM_Factorize(benchmark::State& state) {
  Rng rng(1);
  const Eigen::Index n = state.range(0);
  Matrix a = rng.psd(n);
  for (auto _ : state) benchmark::DoNotOptimize(factorize(require_positive(a)));
}
BENCHMARK(BM_Factorize)->Arg(4)->Arg(16)->Arg(64);

static void BM_GramAssemble(benchmark::State& state) {
  Rng rng(2);
  FunctionSpec phi = rational_function({Matrix::Identity(1, 1), Matrix::Identity(1, 1)},
                                       {Complex(1, 0), Complex(-1, 0)});
  SampleSet s;
  for (int i = 0; i < state.range(0); ++i) s.points.push_back(rng.disk_point(0.9));
  for (auto _ : state) benchmark::DoNotOptimize(gram_assemble(phi, s));
}
BENCHMARK(BM_GramAssemble)->Arg(8)->Arg(32);

static void BM_HerglotzEval(benchmark::State& state) {
  HerglotzMeasure mu;
  mu.dim = 2;
  mu.D = Matrix::Zero(2, 2);
  mu.atoms.push_back({1.0, Matrix::Identity(2, 2)});
  const int cells = state.range(0);
  for (int c = 0; c < cells; ++c)
    mu.density.push_back({2.0 * M_PI * c / cells, 2.0 * M_PI * (c + 1) / cells,
                          Matrix(0.1 * Matrix::Identity(2, 2))});
  const Complex z(0.4, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(herglotz_eval(mu, z));
}
BENCHMARK(BM_HerglotzEval)->Arg(64)->Arg(1024);

static void BM_Integrate(benchmark::State& state) {
  IncreasingOperatorFunction m;
  m.a = 0.0;
  m.b = 2.0 * M_PI;
  m.dim = 2;
  m.no_jumps = true;
  m.eval = [](double t) { return Matrix(t * Matrix::Identity(2, 2)); };
  const double eps = std::pow(10.0, -state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        integrate(std::function<double(double)>([](double t) { return t; }), m, eps));
}
BENCHMARK(BM_Integrate)->Arg(4)->Arg(6);

BENCHMARK_MAIN();
