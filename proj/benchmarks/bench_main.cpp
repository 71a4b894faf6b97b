#include <benchmark/benchmark.h>

#include "svstokes/criticality.hpp"
#include "svstokes/experiments.hpp"
#include "svstokes/manufactured.hpp"
#include "svstokes/pressure_spaces.hpp"
#include "svstokes/stokes.hpp"

using namespace svstokes;

namespace {

void BM_Criticality(benchmark::State& state) {
  const Mesh m = generate_family(MeshFamily::PerturbedCrisscross, static_cast<int>(state.range(0)), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_criticality(m, 0.1));
}
BENCHMARK(BM_Criticality)->Arg(4)->Arg(8)->Arg(16);

void BM_Assemble(benchmark::State& state) {
  const Mesh m = generate_family(MeshFamily::StructuredSquare, static_cast<int>(state.range(0)));
  const VelocitySpace V(m, 4);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(V));
  state.counters["dofs"] = V.num_dofs();
}
BENCHMARK(BM_Assemble)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_ReducedSpace(benchmark::State& state) {
  const Mesh m = generate_family(MeshFamily::StructuredSquare, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_reduced_space(m, 4, 0.0, false));
}
BENCHMARK(BM_ReducedSpace)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const Mesh m = generate_family(MeshFamily::StructuredSquare, static_cast<int>(state.range(0)));
  const VelocitySpace V(m, 4);
  const StokesMatrices M = assemble(V);
  const Eigen::VectorXd F = load_vector(V, manufactured("M1", 4).f);
  const PressureSpaceBasis reduced = build_reduced_space(m, 4, 0.0, false);
  const PressureSpaceBasis mod = inject_modified(reduced, CorrectionFunctional(m, 4, 0.0, FunctionalVariant::Point));
  for (auto _ : state) benchmark::DoNotOptimize(solve_stokes(V, M, mod, F));
  state.counters["dofs"] = V.num_dofs();
}
BENCHMARK(BM_Solve)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_InfSup(benchmark::State& state) {
  const Mesh m = generate_family(MeshFamily::PerturbedCrisscross, 2, perturbation_for_theta(0.05));
  const VelocitySpace V(m, 4);
  const StokesMatrices M = assemble(V);
  const PressureSpaceBasis space = build_reduced_space(m, 4, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(infsup_estimate(V, M, space));
}
BENCHMARK(BM_InfSup)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
