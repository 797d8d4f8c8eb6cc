#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hlab/param_functions.hpp"
#include "hlab/pde_solver.hpp"

namespace hlab {

enum class Theorem {
  LocalPower,
  GlobalPower,
  LocalLog,
  GlobalLog,
  LocalHeat,
  GlobalHeat,
  ClosedManifold
};

std::string to_string(Theorem t);
std::optional<Theorem> theorem_from_string(const std::string& s);

/// Raised when a theorem's hypotheses fail for the supplied field/instance
/// (wrong source kind, h of the wrong sign, inadmissible branch, ...).
class HypothesisError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// One theorem instance: which bound, against which triple, with which
/// constants.  u_bar is filled from the realized field over the checked
/// region during verify().
struct EstimateInstance {
  Theorem theorem = Theorem::GlobalHeat;
  ParamTriple triple = ParamTriple::li_yau(2.0, 1.0, 0.0, 1);
  /// Which branch of (6.2) certifies the triple; chooses whether alpha^4
  /// is absorbed into C in the 1/(R^2 gamma) term.
  RatioKind gamma_condition = RatioKind::GammaPlain;
  double K = 0.0;
  double R = 1.0;       // ball radius, LocalX only
  double C = 1.0;       // the universal constant multiplying C-marked terms
  double l = 1.0;       // power equations
  double delta1 = 0.0, delta2 = 0.0, delta3 = 0.0;
  double a = 0.0;       // log equations
  double u_bar = 1.0;   // max u^{l-1} over the checked region

  static EstimateInstance for_field(Theorem th, const SolutionField& field,
                                    ParamTriple triple, double K, double C);
};

/// rhs = base + C * c_coef; every display is affine and non-decreasing
/// in the universal constant.
struct RhsSplit {
  double base = 0.0;
  double c_coef = 0.0;
  double value(double C) const { return base + C * c_coef; }
};

RhsSplit rhs_split(const EstimateInstance& inst, double t);
double rhs_value(const EstimateInstance& inst, double t);

/// The gradient quantity |grad u|^2/u^2 - alpha u_t/u + (source term) at
/// one interior slice, assembled from log_derivatives.
std::vector<double> lhs_quantity(const SolutionField& field,
                                 const ParamTriple& triple, std::size_t ti);

/// Nodes and interior time slices a verification runs over.
struct Region {
  std::vector<std::size_t> time_indices;   // interior slices, ascending
  std::vector<std::size_t> node_indices;   // spatial subset
  double t_anchor = 0.0;                   // metric time used for the ball
  std::string description;
};

/// All nodes, interior slices with 2*dt <= t and t in [t_lo, t_hi].
Region make_global_region(const SolutionField& field, double t_lo, double t_hi);
/// Subset of the global region within distance R of x0 under g(t_anchor),
/// t_anchor = the last time of the window (the conservative, smaller ball).
Region make_local_region(const SolutionField& field, double t_lo, double t_hi,
                         double x0, double R);

struct VerifyOptions {
  double tol = 1e-8;
  /// Looser tolerance on the first interior slice, where the centered f_t
  /// difference is weakest.
  double first_slice_tol = 1e-6;
};

struct EstimateReport {
  std::vector<double> t, x, lhs, rhs, margin;  // flattened region rows
  std::size_t violations = 0;
  double worst_margin = 0.0;
  double u_bar = 1.0;
  std::string region;
  std::string theorem;

  std::string to_json() const;
  void write_csv(std::ostream& os) const;
};

EstimateReport verify(const SolutionField& field, EstimateInstance inst,
                      const Region& region, const VerifyOptions& opts = {});

/// Theorem-2.2 check: |grad u|^2 <= (max_x u^2(.,0) - u^2(x,t)) / (2t).
/// Constant-free; requires a closed manifold (both models), source None or
/// a spatially constant h <= 0 power source with l >= 1.
EstimateReport closed_manifold_bound(const SolutionField& field,
                                     const Region& region,
                                     const VerifyOptions& opts = {});
EstimateReport closed_manifold_bound(const SolutionField& field,
                                     const VerifyOptions& opts = {});

/// Smallest C >= 0 making every margin non-negative on the region, by
/// monotone bisection (rhs is affine increasing in C).  Throws
/// HypothesisError when the C-free part already fails at a node where the
/// C-coefficient vanishes.
double fit_constant(const SolutionField& field, EstimateInstance inst,
                    const Region& region);

}  // namespace hlab
