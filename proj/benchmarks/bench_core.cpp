#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "dwlab/block_system.hpp"
#include "dwlab/contour.hpp"
#include "dwlab/gcc.hpp"
#include "dwlab/operators.hpp"
#include "dwlab/resolvent.hpp"

namespace {

using namespace dwlab;

std::shared_ptr<SelfAdjointOperator> make_operator(int n) {
  const Grid grid = Grid::periodic(1, n, double(n) / 4.0);
  return std::make_shared<SelfAdjointOperator>(
      build_divergence_form(grid, CoefficientField::sine(1.0, 0.3, double(n) / 4.0)));
}

void BM_spectral_decompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto op = make_operator(n);
    benchmark::DoNotOptimize(op->spectrum().eigenvalues.sum());
  }
}
BENCHMARK(BM_spectral_decompose)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_step_matrix(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto op = make_operator(n);
  DampingOperator b = DampingOperator::identity(n);
  for (auto _ : state) {
    BlockGenerator gen(op, b);
    benchmark::DoNotOptimize(gen.step_matrix(0.25)->sum());
  }
}
BENCHMARK(BM_step_matrix)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_quadratic_resolvent(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto op = make_operator(n);
  DampingOperator b = DampingOperator::identity(n);
  const Complex lam(0.2, 0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadratic_resolvent(*op, b, lam).sum());
  }
}
BENCHMARK(BM_quadratic_resolvent)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_contour_semigroup(benchmark::State& state) {
  Eigen::VectorXd d(8);
  d << 0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0;
  SelfAdjointOperator op(Eigen::MatrixXd(d.asDiagonal()), Grid::periodic(1, 8, 8.0));
  const double t = 10.0;
  const Contour contour = build_contour(t, 0.1, 0.1, 1e4, 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(semigroup_via_contour(op, t, contour, false).sum());
  }
}
BENCHMARK(BM_contour_semigroup)->Unit(benchmark::kMillisecond);

void BM_hamiltonian_flow(benchmark::State& state) {
  HamiltonianSystem sys{CoefficientField::gaussian_bump(1.0, 0.5, 1.5, {0.4, -0.3, 0.0}),
                        CoefficientField::constant(1.0), 2};
  const PhasePoint p0 = on_unit_shell(sys, {-2.0, 0.1, 0.0}, {1.0, 0.35, 0.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(hamiltonian_flow(sys, p0, 10.0, 0.01).max_p_drift);
  }
}
BENCHMARK(BM_hamiltonian_flow)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
