#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hlab/estimates.hpp"
#include "hlab/experiment.hpp"
#include "hlab/harnack.hpp"

using namespace hlab;
namespace nums = std::numbers;

namespace {

const ModelGeometry kTorus = ModelGeometry::flat_torus(1, 2 * nums::pi);

HarnackInstance heat_instance(double K = 0.0, double C = 1.0) {
  HarnackInstance inst;
  inst.kind = HarnackKind::Heat;
  inst.triple = ParamTriple::li_yau(2.0, 1.0, K, 1);
  inst.K = K;
  inst.C = C;
  return inst;
}

SolutionField heat_cosine_run(int nodes, double t_end) {
  const auto grid = SpatialGrid::make(kTorus, nodes);
  std::vector<double> u0(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i)
    u0[i] = 1.0 + 0.5 * std::cos(grid.points[i]);
  return solve(kTorus, grid, u0, SourceSpec::none(), t_end);
}

}  // namespace

TEST_SUITE_BEGIN("harnack");

TEST_CASE("heat factor from closed-form integrals") {
  // Li-Yau alpha=2, n=1, K=0, same endpoint, t: 1 -> 2.
  // log factor = int alpha^2/32 dt + int phi dt = 1/8 + 2 ln 2.
  const auto inst = heat_instance();
  const SpaceTimePath path(kTorus, 0.0, 1.0, 0.0, 2.0);
  const FactorResult r = factor(inst, path);
  CHECK(r.path_quartic == 0.0);
  CHECK(r.young_term == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(r.time_integral == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
  CHECK(r.log_factor ==
        doctest::Approx(0.125 + 2.0 * std::log(2.0)).epsilon(1e-9));
  CHECK(r.converged);
}

TEST_CASE("zero-length path in the vanishing-gap limit") {
  const auto inst = heat_instance();
  const SpaceTimePath path(kTorus, 0.3, 1.0, 0.3, 1.0 + 1e-9);
  const FactorResult r = factor(inst, path);
  CHECK(r.log_factor <= 1e-6);
  CHECK(r.factor == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.tighter == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("quartic speed term for a unit displacement") {
  const auto inst = heat_instance();
  const SpaceTimePath path(kTorus, 1.0, 1.0, 0.0, 2.0);
  const FactorResult r = factor(inst, path);
  CHECK(r.path_quartic == doctest::Approx(0.5).epsilon(1e-12));
  // pre-Young spatial part: int alpha/4 |gamma'|^2/dt = 2/4
  CHECK(r.tighter_spatial == doctest::Approx(0.5).epsilon(1e-12));
  // Young split can only enlarge: 0.5 vs 0.5 + 0.125
  CHECK(r.log_tighter <= r.log_factor);
  CHECK(r.log_factor - r.log_tighter == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("mu formulas") {
  CHECK(harnack_mu1(1.0, 1.0, 1.0, 1.0, 0.0) ==
        doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(harnack_mu2(4.0, 0.5, 9.0, 3.0) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("randomized instances: bounds, ordering, monotonicity") {
  std::mt19937_64 eng(7);
  auto unif = [&](double lo, double hi) {
    return lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 100; ++trial) {
    HarnackInstance inst;
    const int pick = static_cast<int>(eng() % 4);
    inst.kind = static_cast<HarnackKind>(pick);
    inst.K = unif(0.0, 2.0);
    inst.C = unif(0.1, 2.0);
    inst.triple = ParamTriple::li_yau(unif(1.5, 3.0), 1.0, inst.K, 2);
    inst.delta1 = unif(0.0, 1.0);
    inst.delta2 = unif(0.0, 1.0);
    inst.delta3 = unif(0.0, 1.0);
    inst.u_bar = unif(0.5, 2.0);
    inst.a = unif(-1.0, 1.0);
    inst.l = inst.kind == HarnackKind::PowerLgt1 ? unif(1.1, 3.0)
                                                 : unif(-1.0, 1.0);
    const double t1 = unif(0.2, 0.8);
    const double t2 = t1 + unif(0.05, 1.0);
    const double x1 = unif(0.0, 2 * nums::pi);
    const double x2 = unif(0.0, 2 * nums::pi);
    const SpaceTimePath path(kTorus, x1, t1, x2, t2);
    const FactorResult r = factor(inst, path, 65);
    INFO("trial ", trial, " kind ", to_string(inst.kind));
    CHECK(r.factor >= 1.0);
    CHECK(r.log_tighter <= r.log_factor + 1e-12);

    auto log_factor_with = [&](auto mutate) {
      HarnackInstance copy = inst;
      mutate(copy);
      return factor(copy, path, 65).log_factor;
    };
    const double base = r.log_factor;
    CHECK(log_factor_with([](auto& c) { c.C *= 1.1; }) >= base - 1e-12);
    CHECK(log_factor_with([](auto& c) { c.K *= 1.1; }) >= base - 1e-12);
    CHECK(log_factor_with([](auto& c) { c.delta1 *= 1.1; }) >= base - 1e-12);
    CHECK(log_factor_with([](auto& c) { c.delta2 *= 1.1; }) >= base - 1e-12);
    CHECK(log_factor_with([](auto& c) { c.delta3 *= 1.1; }) >= base - 1e-12);
    CHECK(log_factor_with([](auto& c) { c.u_bar *= 1.1; }) >= base - 1e-12);
  }
}

TEST_CASE("factor grows with path length, and with the gap on static paths") {
  const auto inst = heat_instance(0.5);
  const SpaceTimePath near(kTorus, 0.5, 1.0, 0.0, 1.5);
  const SpaceTimePath far(kTorus, 1.5, 1.0, 0.0, 1.5);
  CHECK(factor(inst, far).log_factor > factor(inst, near).log_factor);

  const SpaceTimePath shorter(kTorus, 0.0, 1.0, 0.0, 1.5);
  const SpaceTimePath longer(kTorus, 0.0, 1.0, 0.0, 2.5);
  CHECK(factor(inst, longer).log_factor > factor(inst, shorter).log_factor);
}

TEST_CASE("torus paths wrap the short way") {
  const auto inst = heat_instance();
  const SpaceTimePath wrapped(kTorus, 0.1, 1.0, 2 * nums::pi - 0.1, 2.0);
  CHECK(wrapped.speed(0.3) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("sphere speed follows the moving metric") {
  const auto sphere = ModelGeometry::shrinking_sphere(2);
  const SpaceTimePath path(sphere, 0.4, 0.1, 1.4, 0.3);
  // t(s) runs backwards from t2 to t1, so the scale grows along s
  CHECK(path.speed(0.0) == doctest::Approx(std::sqrt(0.4)).epsilon(1e-12));
  CHECK(path.speed(1.0) == doctest::Approx(std::sqrt(0.8)).epsilon(1e-12));
  CHECK(path.speed(0.0) < path.speed(1.0));
}

TEST_CASE("quadrature self-consistency under node doubling") {
  const auto inst = heat_instance(1.0);
  const SpaceTimePath path(kTorus, 2.0, 0.3, 0.5, 0.9);
  const double a = factor(inst, path, 129).log_factor;
  const double b = factor(inst, path, 257).log_factor;
  CHECK(std::fabs(a - b) <= 1e-8);
}

TEST_CASE("chain property holds for the pre-Young bound (constant alpha)") {
  const auto inst = heat_instance(0.7);
  // aligned split: time gap proportional to arc length
  const SpaceTimePath whole(kTorus, 2.0, 1.0, 0.0, 2.0);
  const SpaceTimePath first(kTorus, 1.0, 1.5, 0.0, 2.0);
  const SpaceTimePath second(kTorus, 2.0, 1.0, 1.0, 1.5);
  const double lhs = factor(inst, whole).log_tighter;
  const double rhs =
      factor(inst, first).log_tighter + factor(inst, second).log_tighter;
  CHECK(lhs <= rhs + 1e-9);
}

TEST_CASE("input validation") {
  HarnackInstance inst = heat_instance();
  const SpaceTimePath path(kTorus, 0.0, 1.0, 1.0, 2.0);
  CHECK_THROWS_AS(factor(inst, path, 8), std::invalid_argument);
  inst.kind = HarnackKind::PowerLgt1;
  inst.l = 1.0;
  CHECK_THROWS_AS(factor(inst, path), std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimePath(kTorus, 0.0, 2.0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SpaceTimePath(kTorus, 0.0, 0.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("constant heat runs have zero violations and margins = log factor") {
  const auto grid = SpatialGrid::make(kTorus, 32);
  const std::vector<double> u0(grid.count(), 1.7);
  const auto f = solve(kTorus, grid, u0, SourceSpec::none(), 1.0);
  const Region region = make_global_region(f, 0.2, 1.0);
  std::vector<std::size_t> nodes = {0, 8, 16, 24};
  std::vector<std::size_t> slices = {region.time_indices.front(),
                                     region.time_indices[region.time_indices.size() / 2],
                                     region.time_indices.back()};
  const HarnackReport rep = verify_harnack(f, heat_instance(), nodes, slices, 65);
  CHECK(rep.violations == 0);
  for (const auto& p : rep.pairs)
    CHECK(p.margin == doctest::Approx(p.log_factor).epsilon(1e-12));
}

TEST_CASE("cosine heat run: zero violations over a 10x10x5x5 endpoint grid") {
  const auto f = heat_cosine_run(128, 1.0);
  const Region region = make_global_region(f, 0.25, 1.0);
  std::vector<std::size_t> nodes, slices;
  for (int i = 0; i < 10; ++i)
    nodes.push_back(region.node_indices[i * region.node_indices.size() / 10]);
  for (int i = 0; i < 5; ++i)
    slices.push_back(
        region.time_indices[i * region.time_indices.size() / 5]);
  const HarnackReport rep = verify_harnack(f, heat_instance(), nodes, slices, 65);
  CHECK(rep.pairs.size() == 1000);  // 100 spatial pairs x C(5,2) time pairs
  CHECK(rep.violations == 0);
  CHECK(rep.quadrature_ok);

  SUBCASE("tightest margin is stable under solver refinement") {
    const auto f2 = heat_cosine_run(256, 1.0);
    const Region region2 = make_global_region(f2, 0.25, 1.0);
    std::vector<std::size_t> nodes2, slices2;
    for (int i = 0; i < 10; ++i)
      nodes2.push_back(region2.node_indices[i * region2.node_indices.size() / 10]);
    for (int i = 0; i < 5; ++i)
      slices2.push_back(
          region2.time_indices[i * region2.time_indices.size() / 5]);
    const HarnackReport rep2 =
        verify_harnack(f2, heat_instance(), nodes2, slices2, 65);
    CHECK(rep2.worst_margin ==
          doctest::Approx(rep.worst_margin).epsilon(0.05));
  }
}

TEST_CASE("power and log harnack runs verify on constant data") {
  const auto grid = SpatialGrid::make(kTorus, 24);
  const std::vector<double> u0(grid.count(), 1.2);

  SUBCASE("power l <= 1") {
    const auto f =
        solve(kTorus, grid, u0, SourceSpec::power(0.5, 0.3, 0.3, 0.1, 0.1), 1.0);
    HarnackInstance inst;
    inst.kind = HarnackKind::PowerLle1;
    inst.triple = ParamTriple::li_yau(2.0, 1.0, 0.0, 1);
    inst.l = 0.5;
    inst.delta1 = 0.3;
    inst.delta2 = 0.1;
    inst.delta3 = 0.1;
    const Region region = make_global_region(f, 0.2, 1.0);
    const std::vector<std::size_t> nodes = {0, 12};
    const std::vector<std::size_t> slices = {region.time_indices.front(),
                                             region.time_indices.back()};
    CHECK(verify_harnack(f, inst, nodes, slices, 65).violations == 0);
  }
  SUBCASE("log") {
    const auto f = solve(kTorus, grid, u0, SourceSpec::log_reaction(-0.5), 1.0);
    HarnackInstance inst;
    inst.kind = HarnackKind::Log;
    inst.triple = ParamTriple::li_yau(2.0, 1.0, 0.0, 1);
    inst.a = -0.5;
    const Region region = make_global_region(f, 0.2, 1.0);
    const std::vector<std::size_t> nodes = {0, 12};
    const std::vector<std::size_t> slices = {region.time_indices.front(),
                                             region.time_indices.back()};
    CHECK(verify_harnack(f, inst, nodes, slices, 65).violations == 0);
  }
}

TEST_SUITE_END();
