#include <benchmark/benchmark.h>

#include <random>

#include "sbloc/prox.hpp"
#include "sbloc/solvers.hpp"

using namespace sbloc;

namespace {

ComplexMatrix noise_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      out(i, j) = Complex(nd(gen), nd(gen));
  return out;
}

ComplexVector noise_vector(std::mt19937_64& gen, Eigen::Index n) {
  return noise_matrix(gen, n, 1).col(0);
}

// n mics, m grid points; C Hermitian.
struct Problem {
  ComplexMatrix a, c;
  Problem(Eigen::Index n, Eigen::Index m) {
    std::mt19937_64 gen(11);
    a = noise_matrix(gen, n, m);
    const ComplexMatrix g = noise_matrix(gen, n, n);
    c = g * g.adjoint();
  }
};

void BM_GradDiagonal(benchmark::State& state) {
  const auto m = state.range(0);
  Problem p(64, m);
  std::mt19937_64 gen(3);
  const DiagonalMatrix x(noise_vector(gen, m)), d(noise_vector(gen, m)), b(noise_vector(gen, m));
  for (auto _ : state)
    benchmark::DoNotOptimize(grad_diagonal(p.a, x, p.c, 1e4, d, b));
}
BENCHMARK(BM_GradDiagonal)->Arg(441)->Arg(1681)->Unit(benchmark::kMillisecond);

void BM_OptimalStepDiagonal(benchmark::State& state) {
  const auto m = state.range(0);
  Problem p(64, m);
  std::mt19937_64 gen(5);
  const DiagonalMatrix g(noise_vector(gen, m));
  for (auto _ : state)
    benchmark::DoNotOptimize(optimal_step(p.a, g, 1e4));
}
BENCHMARK(BM_OptimalStepDiagonal)->Arg(441)->Arg(1681)->Unit(benchmark::kMillisecond);

void BM_GradUnstructured(benchmark::State& state) {
  const auto m = state.range(0);
  Problem p(16, m);
  std::mt19937_64 gen(7);
  const ComplexMatrix x = noise_matrix(gen, m, m), d = noise_matrix(gen, m, m), b = noise_matrix(gen, m, m);
  for (auto _ : state)
    benchmark::DoNotOptimize(grad_unstructured(p.a, x, p.c, 1e4, d, b));
}
BENCHMARK(BM_GradUnstructured)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ShrinkComplex(benchmark::State& state) {
  const auto m = state.range(0);
  std::mt19937_64 gen(9);
  const ComplexMatrix b = noise_matrix(gen, m, m);
  for (auto _ : state)
    benchmark::DoNotOptimize(shrink_complex(b, 0.5));
  state.SetItemsProcessed(state.iterations() * m * m);
}
BENCHMARK(BM_ShrinkComplex)->Arg(256)->Arg(1024);

void BM_SolveStructured(benchmark::State& state) {
  Problem p(64, 441);
  SolverConfig cfg;
  cfg.outer_iterations = 5;
  cfg.alternating_sweeps = 2;
  cfg.gd_steps = 5;
  cfg.initial_value = 1.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_structured(p.a, p.c, cfg));
}
BENCHMARK(BM_SolveStructured)->Unit(benchmark::kMillisecond);

void BM_SolveWeighted(benchmark::State& state) {
  Problem p(16, 64);
  SolverConfig cfg;
  cfg.mode = SolverMode::weighted;
  cfg.outer_iterations = 5;
  cfg.alternating_sweeps = 2;
  cfg.gd_steps = 5;
  cfg.coupling_weight = 1e2;
  cfg.sparsity_weight = 1.0;
  cfg.initial_value = 1.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_weighted(p.a, p.c, cfg));
}
BENCHMARK(BM_SolveWeighted)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
