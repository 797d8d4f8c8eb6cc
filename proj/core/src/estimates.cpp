#include "hlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "hlab/detail/format.hpp"

namespace hlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::LocalPower: return "local_power";
    case Theorem::GlobalPower: return "global_power";
    case Theorem::LocalLog: return "local_log";
    case Theorem::GlobalLog: return "global_log";
    case Theorem::LocalHeat: return "local_heat";
    case Theorem::GlobalHeat: return "global_heat";
    case Theorem::ClosedManifold: return "closed_manifold";
  }
  return "?";
}

std::optional<Theorem> theorem_from_string(const std::string& s) {
  for (Theorem t : {Theorem::LocalPower, Theorem::GlobalPower, Theorem::LocalLog,
                    Theorem::GlobalLog, Theorem::LocalHeat, Theorem::GlobalHeat,
                    Theorem::ClosedManifold})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

EstimateInstance EstimateInstance::for_field(Theorem th, const SolutionField& field,
                                             ParamTriple triple, double K,
                                             double C) {
  EstimateInstance inst;
  inst.theorem = th;
  inst.gamma_condition = triple.ratio_kind();
  inst.triple = std::move(triple);
  inst.K = K;
  inst.C = C;
  const SourceSpec& src = field.source;
  inst.l = src.l;
  inst.delta1 = src.delta1;
  inst.delta2 = src.delta2;
  inst.delta3 = src.delta3;
  inst.a = src.a;
  return inst;
}

RhsSplit rhs_split(const EstimateInstance& inst, double t) {
  const TripleValues v = inst.triple.eval(t);
  const double alpha = v.alpha;
  const double phi = v.phi;
  const double gamma = v.gamma;
  const double n = static_cast<double>(inst.triple.dim());
  const double K = inst.K;
  const double a2 = alpha * alpha;
  const double n32 = std::pow(n, 1.5);
  const double sqrt_alpha = std::sqrt(alpha);
  const double a32 = alpha * sqrt_alpha;
  // With the gamma*alpha^4/(alpha-1) certificate the alpha^4 factor of the
  // 1/(R^2 gamma) term is absorbed into C; the plain certificate keeps it.
  const double alpha4_factor =
      inst.gamma_condition == RatioKind::GammaAlpha4 ? 1.0 : a2 * a2;
  const double R = inst.R;
  const double local_ball = a2 * (1.0 / (R * R) + std::sqrt(K) / R + K);
  const double local_gamma = n * n * alpha4_factor / (R * R * gamma);

  RhsSplit s;
  switch (inst.theorem) {
    case Theorem::LocalPower: {
      s.c_coef = local_ball + local_gamma;
      if (inst.l <= 1.0) {
        const double ub = inst.u_bar;
        s.base = n32 * a2 * K + alpha * std::sqrt(n * ub * inst.delta3) +
                 n * a2 * ub * inst.delta1 +
                 std::sqrt((2.0 - inst.l) / 2.0) * a32 *
                     std::sqrt(n * ub * inst.delta2) +
                 alpha * phi;
      } else {
        const double ub = inst.u_bar;
        const double lm1 = inst.l - 1.0;
        s.base = n32 * a2 * K + n * a2 * lm1 * inst.delta1 * ub +
                 alpha * std::sqrt(n * (inst.l * alpha - 1.0) * ub * inst.delta2 /
                                   lm1) +
                 a32 * std::sqrt(n * lm1 * inst.delta1 * phi) +
                 a32 * std::sqrt(n * inst.delta3 * ub) + alpha * phi;
      }
      return s;
    }
    case Theorem::GlobalPower: {
      const double ub = inst.u_bar;
      if (inst.l <= 1.0) {
        s.c_coef = alpha * (alpha * K + std::sqrt(ub * inst.delta3) +
                            alpha * ub * inst.delta1 +
                            std::sqrt((2.0 - inst.l) / 2.0) *
                                std::sqrt(ub * inst.delta2));
      } else {
        const double lm1 = inst.l - 1.0;
        s.c_coef = alpha * (alpha * K + lm1 * alpha * ub * inst.delta1 +
                            std::sqrt((inst.l * alpha - 1.0) * ub * inst.delta2 /
                                      lm1) +
                            sqrt_alpha * std::sqrt(lm1 * inst.delta1 * phi) +
                            sqrt_alpha * std::sqrt(ub * inst.delta3));
      }
      s.base = alpha * phi;
      return s;
    }
    case Theorem::LocalLog: {
      if (inst.a <= 0.0) {
        s.c_coef = local_ball + local_gamma;
        s.base = n32 * a2 * K + n * std::fabs(inst.a) * a2 + alpha * phi;
      } else {
        s.c_coef = a2 * (1.0 / (R * R) + std::sqrt(K) / R + inst.a + K) +
                   local_gamma;
        s.base = n32 * a2 * K + alpha * phi;
      }
      return s;
    }
    case Theorem::GlobalLog:
      s.c_coef = a2 * (K + std::fabs(inst.a));
      s.base = alpha * phi;
      return s;
    case Theorem::LocalHeat:
      s.c_coef = local_ball + local_gamma;
      s.base = alpha * phi;
      return s;
    case Theorem::GlobalHeat:
      s.c_coef = a2 * K;
      s.base = alpha * phi;
      return s;
    case Theorem::ClosedManifold:
      throw HypothesisError("rhs_split: closed_manifold has no displayed rhs");
  }
  throw std::logic_error("rhs_split: unknown theorem");
}

double rhs_value(const EstimateInstance& inst, double t) {
  return rhs_split(inst, t).value(inst.C);
}

std::vector<double> lhs_quantity(const SolutionField& field,
                                 const ParamTriple& triple, std::size_t ti) {
  const LogDerivatives d = log_derivatives(field, ti);
  const std::size_t N = field.n_space();
  const double t = field.times[ti];
  const double alpha = triple.eval(t).alpha;
  std::vector<double> lhs(N);
  const auto u = field.slice(ti);
  for (std::size_t i = 0; i < N; ++i) {
    lhs[i] = d.grad_sq[i] - alpha * d.f_t[i] +
             alpha * field.source.reaction_per_u(u[i], field.grid.points[i], t);
  }
  return lhs;
}

namespace {

std::vector<std::size_t> interior_slices(const SolutionField& field, double t_lo,
                                         double t_hi) {
  std::vector<std::size_t> out;
  const double dt = field.dt();
  for (std::size_t ti = 1; ti + 1 < field.n_times(); ++ti) {
    const double t = field.times[ti];
    if (t < 2.0 * dt) continue;  // phi ~ n/t and the f_t error are worst here
    if (t >= t_lo - 1e-15 && t <= t_hi + 1e-15) out.push_back(ti);
  }
  return out;
}

}  // namespace

Region make_global_region(const SolutionField& field, double t_lo, double t_hi) {
  Region r;
  r.time_indices = interior_slices(field, t_lo, t_hi);
  r.node_indices.resize(field.n_space());
  for (std::size_t i = 0; i < field.n_space(); ++i) r.node_indices[i] = i;
  r.t_anchor = r.time_indices.empty() ? 0.0 : field.times[r.time_indices.back()];
  r.description = "global t in [" + fmt17(t_lo) + "," + fmt17(t_hi) + "], " +
                  std::to_string(r.time_indices.size()) + " slices x " +
                  std::to_string(r.node_indices.size()) + " nodes";
  return r;
}

Region make_local_region(const SolutionField& field, double t_lo, double t_hi,
                         double x0, double R) {
  Region r;
  r.time_indices = interior_slices(field, t_lo, t_hi);
  r.t_anchor = r.time_indices.empty() ? 0.0 : field.times[r.time_indices.back()];
  for (std::size_t i = 0; i < field.n_space(); ++i) {
    if (field.geometry.distance(field.grid.points[i], x0, r.t_anchor) <= R)
      r.node_indices.push_back(i);
  }
  r.description = "ball(x0=" + fmt17(x0) + ",R=" + fmt17(R) + ") at t_anchor=" +
                  fmt17(r.t_anchor) + ", " +
                  std::to_string(r.time_indices.size()) + " slices x " +
                  std::to_string(r.node_indices.size()) + " nodes";
  return r;
}

namespace {

double max_u_pow(const SolutionField& field, const Region& region, double e) {
  double m = -kInf;
  for (std::size_t ti : region.time_indices)
    for (std::size_t xi : region.node_indices)
      m = std::max(m, std::pow(field.at(ti, xi), e));
  return m;
}

void require_matching_source(const EstimateInstance& inst,
                             const SolutionField& field) {
  const SourceKind k = field.source.kind;
  switch (inst.theorem) {
    case Theorem::LocalPower:
    case Theorem::GlobalPower:
      if (k != SourceKind::Power)
        throw HypothesisError("power estimate needs a power-source field");
      break;
    case Theorem::LocalLog:
    case Theorem::GlobalLog:
      if (k != SourceKind::Log)
        throw HypothesisError("log estimate needs a log-source field");
      break;
    case Theorem::LocalHeat:
    case Theorem::GlobalHeat:
      if (k != SourceKind::None)
        throw HypothesisError("heat estimate needs a source-free field");
      break;
    case Theorem::ClosedManifold:
      break;
  }
}

}  // namespace

EstimateReport verify(const SolutionField& field, EstimateInstance inst,
                      const Region& region, const VerifyOptions& opts) {
  if (inst.theorem == Theorem::ClosedManifold)
    return closed_manifold_bound(field, region, opts);
  require_matching_source(inst, field);
  if ((inst.theorem == Theorem::LocalLog || inst.theorem == Theorem::GlobalLog) &&
      inst.a != field.source.a)
    throw HypothesisError("log estimate: instance a differs from the field's");
  if (inst.theorem == Theorem::LocalPower || inst.theorem == Theorem::GlobalPower) {
    if (field.source.exponent != PowerExponent::UPowL)
      throw HypothesisError("power estimate applies to the h u^l convention");
    inst.u_bar = max_u_pow(field, region, inst.l - 1.0);
  }

  EstimateReport rep;
  rep.theorem = to_string(inst.theorem);
  rep.region = region.description;
  rep.u_bar = inst.u_bar;
  rep.worst_margin = kInf;
  const std::size_t first_ti =
      region.time_indices.empty() ? 0 : region.time_indices.front();
  for (std::size_t ti : region.time_indices) {
    const double t = field.times[ti];
    const std::vector<double> lhs = lhs_quantity(field, inst.triple, ti);
    const double rhs = rhs_value(inst, t);
    const double tol = ti == first_ti ? opts.first_slice_tol : opts.tol;
    for (std::size_t xi : region.node_indices) {
      const double margin = rhs - lhs[xi];
      rep.t.push_back(t);
      rep.x.push_back(field.grid.points[xi]);
      rep.lhs.push_back(lhs[xi]);
      rep.rhs.push_back(rhs);
      rep.margin.push_back(margin);
      if (margin < -tol) ++rep.violations;
      rep.worst_margin = std::min(rep.worst_margin, margin);
    }
  }
  return rep;
}

EstimateReport closed_manifold_bound(const SolutionField& field,
                                     const Region& region,
                                     const VerifyOptions& opts) {
  const SourceSpec& src = field.source;
  if (src.kind == SourceKind::Log)
    throw HypothesisError("closed_manifold: log sources are out of hypothesis");
  if (src.kind == SourceKind::Power) {
    if (!src.h_spatially_constant())
      throw HypothesisError("closed_manifold: h must be spatially constant");
    if (src.h_const > 0.0)
      throw HypothesisError("closed_manifold: h must be <= 0");
    if (src.l < 1.0) throw HypothesisError("closed_manifold: l must be >= 1");
  }

  double max_u0_sq = 0.0;
  for (double v : field.slice(0)) max_u0_sq = std::max(max_u0_sq, v * v);

  EstimateReport rep;
  rep.theorem = to_string(Theorem::ClosedManifold);
  rep.region = region.description;
  rep.worst_margin = kInf;
  const std::size_t N = field.n_space();
  std::vector<double> grad(N), uc(N);
  const std::size_t first_ti =
      region.time_indices.empty() ? 0 : region.time_indices.front();
  for (std::size_t ti : region.time_indices) {
    const double t = field.times[ti];
    auto u = field.slice(ti);
    uc.assign(u.begin(), u.end());
    gradient_sq(field.geometry, field.grid, uc, t, grad);
    const double tol = ti == first_ti ? opts.first_slice_tol : opts.tol;
    for (std::size_t xi : region.node_indices) {
      const double lhs = grad[xi];
      const double rhs = (max_u0_sq - u[xi] * u[xi]) / (2.0 * t);
      const double margin = rhs - lhs;
      rep.t.push_back(t);
      rep.x.push_back(field.grid.points[xi]);
      rep.lhs.push_back(lhs);
      rep.rhs.push_back(rhs);
      rep.margin.push_back(margin);
      if (margin < -tol) ++rep.violations;
      rep.worst_margin = std::min(rep.worst_margin, margin);
    }
  }
  return rep;
}

EstimateReport closed_manifold_bound(const SolutionField& field,
                                     const VerifyOptions& opts) {
  return closed_manifold_bound(
      field, make_global_region(field, 0.0, field.times.back()), opts);
}

double fit_constant(const SolutionField& field, EstimateInstance inst,
                    const Region& region) {
  if (inst.theorem == Theorem::ClosedManifold)
    throw HypothesisError("fit_constant: closed_manifold carries no C");
  require_matching_source(inst, field);
  if (inst.theorem == Theorem::LocalPower || inst.theorem == Theorem::GlobalPower)
    inst.u_bar = max_u_pow(field, region, inst.l - 1.0);

  // Gather per-row (lhs - base, c_coef); margin(C) = min(base + C coef - lhs).
  double worst_deficit_at_zero_coef = -kInf;
  bool any_positive_coef = false;
  std::vector<std::pair<double, double>> rows;  // (lhs - base, c_coef)
  for (std::size_t ti : region.time_indices) {
    const double t = field.times[ti];
    const std::vector<double> lhs = lhs_quantity(field, inst.triple, ti);
    const RhsSplit split = rhs_split(inst, t);
    for (std::size_t xi : region.node_indices) {
      const double deficit = lhs[xi] - split.base;
      rows.emplace_back(deficit, split.c_coef);
      if (split.c_coef > 0.0)
        any_positive_coef = true;
      else
        worst_deficit_at_zero_coef =
            std::max(worst_deficit_at_zero_coef, deficit);
    }
  }
  if (rows.empty()) throw std::invalid_argument("fit_constant: empty region");
  if (worst_deficit_at_zero_coef > 0.0)
    throw HypothesisError(
        "fit_constant: infeasible, C-free part fails where the C-coefficient "
        "vanishes (deficit " +
        fmt17(worst_deficit_at_zero_coef) + ")");
  if (!any_positive_coef)
    throw HypothesisError("fit_constant: no node carries a positive C-coefficient");

  auto min_margin = [&](double C) {
    double m = kInf;
    for (const auto& [deficit, coef] : rows) m = std::min(m, C * coef - deficit);
    return m;
  };
  if (min_margin(0.0) >= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (min_margin(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 80)
      throw HypothesisError("fit_constant: no finite C closes the margins");
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (min_margin(mid) >= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

void EstimateReport::write_csv(std::ostream& os) const {
  os << "t,x,lhs,rhs,margin\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    os << fmt17(t[i]) << ',' << fmt17(x[i]) << ',' << fmt17(lhs[i]) << ','
       << fmt17(rhs[i]) << ',' << fmt17(margin[i]) << '\n';
}

}  // namespace hlab
