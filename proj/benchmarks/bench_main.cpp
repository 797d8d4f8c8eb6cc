#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hlab/estimates.hpp"
#include "hlab/harnack.hpp"
#include "hlab/param_functions.hpp"
#include "hlab/pde_solver.hpp"

using namespace hlab;
namespace nums = std::numbers;

namespace {

const ModelGeometry kTorus = ModelGeometry::flat_torus(1, 2 * nums::pi);
const ModelGeometry kSphere = ModelGeometry::shrinking_sphere(2);

void BM_LaplacianTorus(benchmark::State& state) {
  const auto grid = SpatialGrid::make(kTorus, static_cast<int>(state.range(0)));
  std::vector<double> u(grid.count()), out(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i)
    u[i] = 1.0 + 0.5 * std::cos(grid.points[i]);
  for (auto _ : state) {
    laplacian_apply(kTorus, grid, u, 0.0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * grid.count());
}
BENCHMARK(BM_LaplacianTorus)->Arg(256)->Arg(1024);

void BM_LaplacianSphere(benchmark::State& state) {
  const auto grid = SpatialGrid::make(kSphere, static_cast<int>(state.range(0)));
  std::vector<double> u(grid.count()), out(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i)
    u[i] = 1.0 + 0.5 * std::cos(grid.points[i]);
  for (auto _ : state) {
    laplacian_apply(kSphere, grid, u, 0.1, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * grid.count());
}
BENCHMARK(BM_LaplacianSphere)->Arg(256)->Arg(1024);

void BM_HeatSolve(benchmark::State& state) {
  const auto grid = SpatialGrid::make(kTorus, static_cast<int>(state.range(0)));
  std::vector<double> u0(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i)
    u0[i] = 1.0 + 0.5 * std::cos(grid.points[i]);
  for (auto _ : state) {
    auto field = solve(kTorus, grid, u0, SourceSpec::none(), 0.1);
    benchmark::DoNotOptimize(field.u.data());
  }
}
BENCHMARK(BM_HeatSolve)->Arg(128)->Arg(256);

void BM_CheckConditions(benchmark::State& state) {
  const auto triple = ParamTriple::li_xu(1.0, 2);
  for (auto _ : state) {
    auto rep =
        check_conditions(triple, 1e-3, 50.0, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(rep.pass);
  }
}
BENCHMARK(BM_CheckConditions)->Arg(2000)->Arg(10000);

void BM_HarnackFactor(benchmark::State& state) {
  HarnackInstance inst;
  inst.kind = HarnackKind::Heat;
  inst.triple = ParamTriple::li_yau(2.0, 1.0, 1.0, 2);
  inst.K = 1.0;
  const SpaceTimePath path(kTorus, 2.0, 0.5, 0.0, 1.5);
  for (auto _ : state) {
    auto r = factor(inst, path, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(r.log_factor);
  }
}
BENCHMARK(BM_HarnackFactor)->Arg(129)->Arg(257);

void BM_VerifyGlobalHeat(benchmark::State& state) {
  const auto grid = SpatialGrid::make(kTorus, 128);
  std::vector<double> u0(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i)
    u0[i] = 1.0 + 0.5 * std::cos(grid.points[i]);
  const auto field = solve(kTorus, grid, u0, SourceSpec::none(), 0.5);
  const auto inst = EstimateInstance::for_field(
      Theorem::GlobalHeat, field, ParamTriple::li_yau(2.0, 1.0, 0.0, 1), 0.0,
      1.0);
  const Region region = make_global_region(field, 0.05, 0.5);
  for (auto _ : state) {
    auto rep = verify(field, inst, region);
    benchmark::DoNotOptimize(rep.violations);
  }
}
BENCHMARK(BM_VerifyGlobalHeat);

}  // namespace

BENCHMARK_MAIN();
