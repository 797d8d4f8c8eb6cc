#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>

#include "hlab/param_functions.hpp"

using namespace hlab;

TEST_SUITE_BEGIN("param_functions");

TEST_CASE("linear Li-Xu evaluation by hand substitution") {
  const auto p = ParamTriple::linear_li_xu(0.25, 1.0, 2);
  const TripleValues v = p.eval(1.0);
  CHECK(v.alpha == doctest::Approx(3.0).epsilon(1e-15));
  // phi = n/t + n K (1 + 2Kt + mu K t) = 2 + 2 * 3.25
  CHECK(v.phi == doctest::Approx(8.5).epsilon(1e-15));
  CHECK(v.gamma == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.dalpha == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(v.dgamma == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Li-Yau evaluation with K=0 drops the curvature term") {
  const auto p = ParamTriple::li_yau(2.0, 1.0, 0.0, 1);
  const TripleValues v = p.eval(1.0);
  CHECK(v.alpha == 2.0);
  CHECK(v.phi == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(v.gamma == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(v.dalpha == 0.0);
}

TEST_CASE("domain errors") {
  const auto h = ParamTriple::hamilton(2.0, 1);
  CHECK_THROWS_AS(h.eval(0.0), std::domain_error);
  CHECK_THROWS_AS(h.eval(-1.0), std::domain_error);
  CHECK_NOTHROW(h.eval(0.5));  // K t = 1 is the edge
  CHECK_THROWS_AS(h.eval(0.6), std::domain_error);
  CHECK_THROWS_AS(ParamTriple::li_yau(1.0, 1.0, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ParamTriple::hamilton(0.0, 1), std::invalid_argument);
}

TEST_CASE("analytic derivatives agree with finite differences at O(h^2)") {
  const ParamTriple triples[] = {
      ParamTriple::li_yau(2.0, 1.5, 1.0, 2), ParamTriple::hamilton(1.0, 2),
      ParamTriple::li_xu(1.0, 2), ParamTriple::linear_li_xu(0.3, 1.0, 2)};
  for (const auto& p : triples) {
    for (double t : {0.3, 0.7}) {
      auto fd_err = [&](double h) {
        const TripleValues lo = p.eval(t - h);
        const TripleValues hi = p.eval(t + h);
        const TripleValues c = p.eval(t);
        const double da = (hi.alpha - lo.alpha) / (2 * h) - c.dalpha;
        const double dp = (hi.phi - lo.phi) / (2 * h) - c.dphi;
        const double dg = (hi.gamma - lo.gamma) / (2 * h) - c.dgamma;
        return std::fabs(da) + std::fabs(dp) + std::fabs(dg);
      };
      const double e1 = fd_err(1e-2);
      const double e2 = fd_err(5e-3);
      REQUIRE(e1 > 1e-12);  // constants would make the ratio meaningless
      CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
    }
  }
}

TEST_CASE("all four families pass (6.1)/(6.2) on 1e4 geometric points") {
  struct Row {
    ParamTriple p;
    double lo, hi;
  };
  const Row rows[] = {
      {ParamTriple::li_yau(2.0, 1.0, 1.0, 2), 1e-3, 10.0},
      {ParamTriple::li_yau(1.5, 2.0, 1.0, 2), 1e-3, 10.0},
      {ParamTriple::hamilton(1.0, 2), 1e-4, 1.0},
      {ParamTriple::li_xu(1.0, 2), 1e-3, 50.0},
      {ParamTriple::linear_li_xu(0.25, 1.0, 2), 1e-3, 10.0},
      {ParamTriple::linear_li_xu(0.30, 1.0, 2), 1e-3, 10.0},
  };
  for (const auto& r : rows) {
    const ConditionReport rep = check_conditions(r.p, r.lo, r.hi, 10000, 1e-9);
    INFO(r.p.name());
    CHECK(rep.pass);
    CHECK(rep.worst_margin() >= -1e-10);
  }
}

TEST_CASE("mu below 1/4 fails the first (6.1) inequality near t = 2") {
  const auto p = ParamTriple::linear_li_xu(0.1, 1.0, 2);
  const ConditionReport rep = check_conditions(p, 1e-3, 10.0, 4000, 1e-9);
  CHECK_FALSE(rep.pass);
  // quadratic mu K^2 t^2 - K t + 1 = -0.6 at t=2; margin 4K(...)/(1+2Kt)
  std::size_t near2 = 0;
  for (std::size_t i = 1; i < rep.grid.size(); ++i)
    if (std::fabs(rep.grid[i] - 2.0) < std::fabs(rep.grid[near2] - 2.0))
      near2 = i;
  CHECK(rep.m1[near2] == doctest::Approx(4.0 * -0.6 / 5.0).epsilon(1e-2));
  CHECK(rep.m2[near2] > 0.0);  // only the first inequality breaks
  CHECK(rep.m3[near2] > 0.0);
  CHECK(rep.c3[near2] > 0.0);
}

TEST_CASE("linear Li-Xu boundedness ratio is exactly one half") {
  const auto p = ParamTriple::linear_li_xu(0.25, 2.0, 3);
  for (double t : {1e-8, 1e-3, 0.37, 5.0, 100.0})
    CHECK(p.boundedness_ratio(t) == 0.5);
  const ConditionReport rep = check_conditions(p, 1e-6, 10.0, 1000, 1e-9);
  CHECK(rep.ratio_sup == 0.5);
  CHECK(rep.ratio_kind == RatioKind::GammaPlain);
}

TEST_CASE("Hamilton ratio approaches 1/(2K) as t -> 0") {
  for (double K : {1.0, 2.0, 0.5}) {
    const auto p = ParamTriple::hamilton(K, 2);
    CHECK(p.boundedness_ratio(1e-12) ==
          doctest::Approx(1.0 / (2.0 * K)).epsilon(1e-9));
    // stable far from the guard too
    CHECK(p.boundedness_ratio(1e-8) ==
          doctest::Approx(1.0 / (2.0 * K)).epsilon(1e-6));
  }
}

TEST_CASE("Li-Xu ratio limits: 3/2 at the origin, 16 at infinity") {
  // The appendix claims 2 and 1 for gamma alpha^4/(alpha-1); expanding
  // sinh cosh gives alpha-1 = (2/3)Kt + O(t^3), so the origin limit is
  // 3/2, and alpha -> 2 makes the alpha^4 ratio tend to 16.
  const auto p = ParamTriple::li_xu(1.0, 2);
  CHECK(p.ratio_kind() == RatioKind::GammaAlpha4);
  CHECK(p.boundedness_ratio(1e-9) == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(p.boundedness_ratio(1e-12) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(p.boundedness_ratio(50.0) == doctest::Approx(16.0).epsilon(1e-6));
  // cross-check the series path against direct evaluation where both work
  const double direct = [&] {
    const double x = 0.04;
    const double s = std::sinh(x);
    const double am1 = (s * std::cosh(x) - x) / (s * s);
    const double a = 1.0 + am1;
    return std::tanh(x) * a * a * a * a / am1;
  }();
  CHECK(p.boundedness_ratio(0.04) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("Li-Xu alpha is uniformly bounded by 2") {
  const auto p = ParamTriple::li_xu(1.0, 2);
  double sup = 0.0;
  for (double t = 1e-3; t < 80.0; t *= 1.15) sup = std::max(sup, p.eval(t).alpha);
  CHECK(sup <= 2.0 + 1e-9);
  CHECK(sup > 1.9);
}

TEST_CASE("Li-Xu derivative matches the closed form 2K + 2K(1+alpha)coth") {
  const auto p = ParamTriple::li_xu(1.3, 2);
  for (double t : {0.01, 0.2, 1.0, 4.0}) {
    const TripleValues v = p.eval(t);
    const double K = 1.3;
    const double lhs = 2.0 * v.phi / 2.0 - v.dalpha;
    const double rhs = 2.0 * K + 2.0 * K * (1.0 + v.alpha) / std::tanh(K * t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
}

TEST_CASE("bisection on mu brackets the admissibility threshold at 1/4") {
  auto passes = [](double mu) {
    const auto p = ParamTriple::linear_li_xu(mu, 1.0, 2);
    return check_conditions(p, 1e-3, 10.0, 2000, 1e-9).pass;
  };
  double lo = 0.1, hi = 0.5;
  REQUIRE_FALSE(passes(lo));
  REQUIRE(passes(hi));
  for (int i = 0; i < 40 && hi - lo > 1e-6; ++i) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? hi : lo) = mid;
  }
  CHECK(lo >= 0.249);
  CHECK(hi <= 0.251);
}

TEST_CASE("theta sweep flips at 2") {
  auto passes = [](double theta, double K) {
    const auto p = ParamTriple::li_yau(2.0, theta, K, 2);
    return check_conditions(p, 1e-3, 10.0, 2000, 1e-9).pass;
  };
  CHECK(passes(0.5, 1.0));
  CHECK(passes(1.0, 1.0));
  CHECK(passes(2.0, 1.0));
  CHECK_FALSE(passes(2.5, 1.0));
  // K = 0 flips immediately past 2
  CHECK(passes(2.0, 0.0));
  CHECK_FALSE(passes(2.01, 0.0));
}

TEST_CASE("custom triples run through the checker") {
  // alpha = 2, phi = 2/t, gamma = t reproduces Li-Yau at K=0, n=2.
  const auto p = ParamTriple::custom(
      [](double) { return 2.0; }, [](double t) { return 4.0 / t; },
      [](double t) { return t; }, [](double) { return 0.0; },
      [](double t) { return -4.0 / (t * t); }, [](double) { return 1.0; }, 0.0,
      2);
  const ConditionReport rep = check_conditions(p, 1e-2, 5.0, 500, 1e-9);
  CHECK(rep.pass);
}

TEST_CASE("report serialization carries the typed fields") {
  const auto rep =
      check_conditions(ParamTriple::linear_li_xu(0.25, 1.0, 2), 0.1, 1.0, 16);
  const std::string j = rep.to_json();
  for (const char* key : {"\"grid\"", "\"c2_margins\"", "\"c3_margin\"",
                          "\"boundedness\"", "\"monotone_ok\"", "\"pass\"",
                          "\"ratio_kind\"", "\"sup_value\""})
    CHECK(j.find(key) != std::string::npos);
  std::ostringstream csv;
  rep.write_csv(csv);
  CHECK(csv.str().rfind("t,m1,m2,m3,c3,ratio\n", 0) == 0);
}

TEST_SUITE_END();
