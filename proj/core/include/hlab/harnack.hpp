#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "hlab/geometry.hpp"
#include "hlab/param_functions.hpp"
#include "hlab/pde_solver.hpp"

namespace hlab {

enum class HarnackKind { PowerLle1, PowerLgt1, Log, Heat };

std::string to_string(HarnackKind k);

/// Space-time segment from (x2, t2) back to (x1, t1), t1 < t2: the spatial
/// track is the geodesic x(s) from x2 to x1, the time track is
/// t(s) = (1-s) t2 + s t1.  speed(s) is measured with the moving metric
/// g(t(s)).
struct SpaceTimePath {
  ModelGeometry geometry;
  double x1 = 0.0, t1 = 0.0;
  double x2 = 0.0, t2 = 0.0;

  SpaceTimePath(const ModelGeometry& geo, double x1_, double t1_, double x2_,
                double t2_);
  double time_at(double s) const { return (1.0 - s) * t2 + s * t1; }
  double coord_delta() const { return delta_; }  // signed shortest track
  double speed(double s) const;

private:
  double delta_ = 0.0;
};

/// mu_1 and mu_2 from the Harnack exponents.
double harnack_mu1(double u_bar1, double d1, double d2, double d3, double l);
double harnack_mu2(double u_bar2, double d1, double d3, double l);

struct HarnackInstance {
  HarnackKind kind = HarnackKind::Heat;
  ParamTriple triple = ParamTriple::li_yau(2.0, 1.0, 0.0, 1);
  double K = 0.0;
  double C = 1.0;
  double l = 1.0;
  double delta1 = 0.0, delta2 = 0.0, delta3 = 0.0;
  double u_bar = 1.0;  // max u^{l-1} (u_bar1 for l<=1, u_bar2 for l>1)
  double a = 0.0;
};

/// exp(Gamma) resp. exp(Lambda) decomposed into its displayed pieces, plus
/// the sharper pre-Young spatial bound for comparison.
struct FactorResult {
  double path_quartic = 0.0;    // int_0^1 |gamma'(s)|^4 / (2 (t2-t1)^2) ds
  double young_term = 0.0;      // int_0^1 alpha(t(s))^2/32 ds
  double time_integral = 0.0;   // int [phi + C-terms + ...] dt
  double log_factor = 0.0;      // path_quartic + young_term + time_integral
  double factor = 1.0;
  double tighter_spatial = 0.0; // int_0^1 alpha(t(s)) |gamma'(s)|^2/(4 dt) ds
  double log_tighter = 0.0;     // tighter_spatial + time_integral
  double tighter = 1.0;
  bool converged = true;
  double quad_rel_change = 0.0;
};

/// Quadrature of the Harnack exponent along the path; Richardson
/// disagreement above 1e-6 relative is flagged via converged=false.
FactorResult factor(const HarnackInstance& inst, const SpaceTimePath& path,
                    int quad_nodes = 129);

struct HarnackPair {
  double x1, t1, x2, t2;
  double log_u1, log_u2, log_factor;
  double margin;  // log u1 + log factor - log u2
};

struct HarnackReport {
  std::vector<HarnackPair> pairs;
  std::size_t violations = 0;
  double worst_margin = 0.0;
  bool quadrature_ok = true;

  std::string to_json() const;
  void write_csv(std::ostream& os) const;
};

/// Checks u(x2,t2) <= u(x1,t1) * factor over every endpoint pair drawn
/// from the given node and interior-slice index sets with t1 < t2.
/// u_bar for the power kinds is computed from the field over the slices.
HarnackReport verify_harnack(const SolutionField& field, HarnackInstance inst,
                             const std::vector<std::size_t>& node_indices,
                             const std::vector<std::size_t>& time_indices,
                             int quad_nodes = 129, double tol = 1e-8);

}  // namespace hlab
