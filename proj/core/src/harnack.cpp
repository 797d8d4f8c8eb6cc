#include "hlab/harnack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "hlab/detail/format.hpp"
#include "hlab/quadrature.hpp"

namespace hlab {

std::string to_string(HarnackKind k) {
  switch (k) {
    case HarnackKind::PowerLle1: return "power_l_le_1";
    case HarnackKind::PowerLgt1: return "power_l_gt_1";
    case HarnackKind::Log: return "log";
    case HarnackKind::Heat: return "heat";
  }
  return "?";
}

SpaceTimePath::SpaceTimePath(const ModelGeometry& geo, double x1_, double t1_,
                             double x2_, double t2_)
    : geometry(geo), x1(x1_), t1(t1_), x2(x2_), t2(t2_) {
  if (!(t1 < t2)) throw std::invalid_argument("SpaceTimePath: need t1 < t2");
  if (!(t1 > 0.0)) throw std::invalid_argument("SpaceTimePath: need t1 > 0");
  double d = x1 - x2;
  if (geometry.periodic()) {
    const double side = geometry.side();
    d = std::remainder(d, side);
  }
  delta_ = d;
}

double SpaceTimePath::speed(double s) const {
  const double base = std::fabs(delta_);
  if (geometry.kind() == GeometryKind::FlatTorus) return base;
  return base * std::sqrt(geometry.metric_scale(time_at(s)));
}

double harnack_mu1(double u_bar1, double d1, double d2, double d3, double l) {
  return std::sqrt(u_bar1 * d3) + u_bar1 * d1 + std::sqrt((2.0 - l) * u_bar1 * d2);
}

double harnack_mu2(double u_bar2, double d1, double d3, double l) {
  return (l - 1.0) * u_bar2 * d1 + std::sqrt(u_bar2 * d3);
}

namespace {

// Time integrand of the exponent (everything except the path terms).
double time_integrand(const HarnackInstance& inst, double t) {
  const TripleValues v = inst.triple.eval(t);
  const double alpha = v.alpha;
  const double phi = v.phi;
  switch (inst.kind) {
    case HarnackKind::Heat:
      return phi + inst.C * alpha * inst.K;
    case HarnackKind::PowerLle1: {
      const double mu1 = harnack_mu1(inst.u_bar, inst.delta1, inst.delta2,
                                     inst.delta3, inst.l);
      return phi + inst.C * alpha * alpha * (inst.K + mu1) +
             inst.delta1 * inst.u_bar;
    }
    case HarnackKind::PowerLgt1: {
      const double mu2 = harnack_mu2(inst.u_bar, inst.delta1, inst.delta3, inst.l);
      const double lm1 = inst.l - 1.0;
      return phi + inst.C * alpha * alpha * (inst.K + mu2) +
             alpha * std::sqrt((inst.l * alpha - 1.0) / lm1) *
                 std::sqrt(inst.u_bar * inst.delta2) +
             alpha * std::sqrt(alpha) *
                 std::sqrt(inst.triple.dim() * lm1 * phi * inst.delta1);
    }
    case HarnackKind::Log:
      return phi + inst.C * alpha * alpha * (inst.K + std::fabs(inst.a));
  }
  throw std::logic_error("time_integrand: unknown kind");
}

}  // namespace

FactorResult factor(const HarnackInstance& inst, const SpaceTimePath& path,
                    int quad_nodes) {
  if (quad_nodes < 16) throw std::invalid_argument("factor: quad_nodes >= 16");
  if (inst.kind == HarnackKind::PowerLgt1 && !(inst.l > 1.0))
    throw std::invalid_argument("factor: power_l_gt_1 needs l > 1 strictly");
  if (inst.kind == HarnackKind::PowerLle1 && inst.l > 1.0)
    throw std::invalid_argument("factor: power_l_le_1 needs l <= 1");
  const double dt = path.t2 - path.t1;

  FactorResult r;
  const QuadResult quartic = simpson_checked(
      [&](double s) {
        const double q = path.speed(s);
        const double q2 = q * q;
        return q2 * q2 / (2.0 * dt * dt);
      },
      0.0, 1.0, quad_nodes);
  // Young counterpart of the quartic speed term.  For a genuine path the
  // pointwise split alpha q/(4 dt) <= q^2/(2 dt^2) + alpha^2/32 lives on
  // the path parameter, so the integral is in s (it coincides with the
  // t-integral exactly when t2 - t1 = 1); that is what keeps the
  // pre-Young bound below the factor for every gap.  A zero-extent path
  // needs no completion and keeps the t-integral, which vanishes with
  // the gap.
  const QuadResult young =
      path.coord_delta() == 0.0
          ? simpson_checked(
                [&](double t) {
                  const double a = inst.triple.eval(t).alpha;
                  return a * a / 32.0;
                },
                path.t1, path.t2, quad_nodes)
          : simpson_checked(
                [&](double s) {
                  const double a = inst.triple.eval(path.time_at(s)).alpha;
                  return a * a / 32.0;
                },
                0.0, 1.0, quad_nodes);
  const QuadResult tail = simpson_checked(
      [&](double t) { return time_integrand(inst, t); }, path.t1, path.t2,
      quad_nodes);
  const QuadResult tighter = simpson_checked(
      [&](double s) {
        const double q = path.speed(s);
        return inst.triple.eval(path.time_at(s)).alpha * q * q / (4.0 * dt);
      },
      0.0, 1.0, quad_nodes);

  r.path_quartic = quartic.value;
  r.young_term = young.value;
  r.time_integral = tail.value;
  r.log_factor = r.path_quartic + r.young_term + r.time_integral;
  r.factor = std::exp(r.log_factor);
  r.tighter_spatial = tighter.value;
  r.log_tighter = r.tighter_spatial + r.time_integral;
  r.tighter = std::exp(r.log_tighter);
  r.quad_rel_change = std::max({quartic.rel_change, young.rel_change,
                                tail.rel_change, tighter.rel_change});
  r.converged = r.quad_rel_change <= 1e-6;
  return r;
}

HarnackReport verify_harnack(const SolutionField& field, HarnackInstance inst,
                             const std::vector<std::size_t>& node_indices,
                             const std::vector<std::size_t>& time_indices,
                             int quad_nodes, double tol) {
  switch (inst.kind) {
    case HarnackKind::Heat:
      if (field.source.kind != SourceKind::None)
        throw std::invalid_argument("verify_harnack: field is not a heat run");
      break;
    case HarnackKind::Log:
      if (field.source.kind != SourceKind::Log)
        throw std::invalid_argument("verify_harnack: field is not a log run");
      break;
    case HarnackKind::PowerLle1:
    case HarnackKind::PowerLgt1:
      if (field.source.kind != SourceKind::Power)
        throw std::invalid_argument("verify_harnack: field is not a power run");
      break;
  }
  if (inst.kind == HarnackKind::PowerLle1 || inst.kind == HarnackKind::PowerLgt1) {
    double m = 0.0;
    for (std::size_t ti : time_indices)
      for (std::size_t xi : node_indices)
        m = std::max(m, std::pow(field.at(ti, xi), inst.l - 1.0));
    inst.u_bar = m;
  }

  HarnackReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i1 : time_indices) {
    for (std::size_t i2 : time_indices) {
      if (field.times[i1] >= field.times[i2]) continue;
      for (std::size_t n1 : node_indices) {
        for (std::size_t n2 : node_indices) {
          const double x1 = field.grid.points[n1];
          const double x2 = field.grid.points[n2];
          const SpaceTimePath path(field.geometry, x1, field.times[i1], x2,
                                   field.times[i2]);
          const FactorResult f = factor(inst, path, quad_nodes);
          rep.quadrature_ok = rep.quadrature_ok && f.converged;
          HarnackPair p{};
          p.x1 = x1;
          p.t1 = field.times[i1];
          p.x2 = x2;
          p.t2 = field.times[i2];
          p.log_u1 = std::log(field.at(i1, n1));
          p.log_u2 = std::log(field.at(i2, n2));
          p.log_factor = f.log_factor;
          p.margin = p.log_u1 + p.log_factor - p.log_u2;
          if (p.margin < -tol) ++rep.violations;
          rep.worst_margin = std::min(rep.worst_margin, p.margin);
          rep.pairs.push_back(p);
        }
      }
    }
  }
  return rep;
}

void HarnackReport::write_csv(std::ostream& os) const {
  os << "x1,t1,x2,t2,log_u1,log_u2,log_factor,margin\n";
  for (const auto& p : pairs)
    os << fmt17(p.x1) << ',' << fmt17(p.t1) << ',' << fmt17(p.x2) << ','
       << fmt17(p.t2) << ',' << fmt17(p.log_u1) << ',' << fmt17(p.log_u2) << ','
       << fmt17(p.log_factor) << ',' << fmt17(p.margin) << '\n';
}

}  // namespace hlab
