// Microbenchmarks for the hot paths: right-hand-side evaluation, the modal
// solve, distance computation, full protocol integration, and one sweep
// cell.  Run with --benchmark_filter=... to narrow the set.

#include <benchmark/benchmark.h>

#include "jcpme/integrator.hpp"
#include "jcpme/liouvillian.hpp"
#include "jcpme/protocol.hpp"
#include "jcpme/spectral.hpp"

using namespace jcpme;

namespace {

ModelParams lossy(double kappa, int N = 1) {
  ModelParams p;
  p.kappa = kappa;
  p.gamma = 0.1;
  p.N = N;
  return p;
}

void bm_rhs_single_excitation(benchmark::State& state) {
  const ModelParams p = lossy(8.0);
  const Generator gen(GeneratorKind::SingleExcitation, p);
  const Matrix rho = DensityMatrix::pure({Atom::e, 0}, 1).entries();
  Matrix out(3, 3);
  for (auto _ : state) {
    gen.apply(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_rhs_single_excitation);

void bm_rhs_ladder(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const ModelParams p = lossy(8.0, N);
  const Generator gen(GeneratorKind::NManifold, p);
  const Matrix rho = DensityMatrix::pure({Atom::e, N - 1}, N).entries();
  Matrix out(p.dimension(), p.dimension());
  for (auto _ : state) {
    gen.apply(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(bm_rhs_ladder)->DenseRange(2, 6);

void bm_eigen_decompose(benchmark::State& state) {
  const DynamicalMatrix R = build_dynamical_matrix(1.0, 8.0);
  for (auto _ : state) {
    SpectralDecomposition dec = eigen_decompose(R);
    benchmark::DoNotOptimize(dec.right.data());
  }
}
BENCHMARK(bm_eigen_decompose);

void bm_trace_distance(benchmark::State& state) {
  ModelParams p = lossy(8.0);
  p.n_th = 0.05;
  p.n_th_atom = 0.1;
  const DensityMatrix a = DensityMatrix::pure({Atom::e, 0}, 1);
  const DensityMatrix b =
      stationary_state(GeneratorKind::ThermalRestricted, p);
  for (auto _ : state) {
    const double d = trace_distance(a, b);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(bm_trace_distance);

void bm_two_step_protocol(benchmark::State& state) {
  ProtocolSpec spec;
  spec.kind = ProtocolKind::TwoStep;
  spec.model.kappa = 8.0;
  const int samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const RelaxationRecord rec = run_protocol(spec, samples);
    benchmark::DoNotOptimize(rec.d_tr.data());
  }
}
BENCHMARK(bm_two_step_protocol)->Arg(201)->Arg(2001);

void bm_sweep_cell(benchmark::State& state) {
  ProtocolSpec base;
  base.kind = ProtocolKind::TwoStep;
  base.model.kappa = 8.0;
  const AxisSpec x{SweepAxis::TauOverTau0, 1.0, 1.0, 1};
  const AxisSpec y{SweepAxis::DeltaOverG, 0.0, 0.0, 1};
  for (auto _ : state) {
    const PhaseDiagram grid = sweep_phase_diagram(base, x, y, 8.0, 2001, 1);
    benchmark::DoNotOptimize(grid.margin.data());
  }
}
BENCHMARK(bm_sweep_cell);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
