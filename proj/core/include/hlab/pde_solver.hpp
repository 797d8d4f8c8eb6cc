#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlab/geometry.hpp"

namespace hlab {

enum class SourceKind { None, Power, Log };

/// Reaction-term convention for the power source: h u^l is the evolution
/// equation's form; h u^{l-1} is the closed-manifold theorem's form.
/// Both are available so the constant-free bound can be checked under
/// either reading.
enum class PowerExponent { UPowL, UPowLMinus1 };

std::string to_string(SourceKind k);

/// Reaction term of the evolution equation: none (heat), h(x,t) u^l
/// (power), or a u log u (log).
struct SourceSpec {
  SourceKind kind = SourceKind::None;

  // Power source.
  double l = 1.0;
  double h_const = 0.0;
  std::function<double(double, double)> h_field;  // h(x, t); overrides h_const
  double delta1 = 0.0, delta2 = 0.0, delta3 = 0.0;
  PowerExponent exponent = PowerExponent::UPowL;

  // Log source.
  double a = 0.0;

  static SourceSpec none() { return {}; }
  static SourceSpec power(double l, double h_const, double d1 = 0.0,
                          double d2 = 0.0, double d3 = 0.0,
                          PowerExponent exponent = PowerExponent::UPowL);
  static SourceSpec power_field(double l, std::function<double(double, double)> h,
                                double d1, double d2, double d3,
                                PowerExponent exponent = PowerExponent::UPowL);
  static SourceSpec log_reaction(double a);

  double h_at(double x, double t) const {
    return h_field ? h_field(x, t) : h_const;
  }
  bool h_spatially_constant() const { return !h_field; }
  /// Reaction contribution divided by u (the u^{l-1} h term of the log
  /// identity), used by the gradient-quantity assembly.
  double reaction_per_u(double u, double x, double t) const;
  /// Full reaction term added to u_t.
  double reaction(double u, double x, double t) const;
};

/// Thrown when time stepping must stop: a stage value lost positivity or
/// the solution exceeded the overflow cap (power sources with l > 1 blow
/// up in finite time).  t_reached is the last completed time.
class SolveAborted : public std::runtime_error {
public:
  enum class Reason { PositivityLost, Overflow };
  SolveAborted(Reason r, double t_reached);
  Reason reason() const { return reason_; }
  double t_reached() const { return t_reached_; }

private:
  Reason reason_;
  double t_reached_;
};

class StabilityViolated : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Positive space-time solution on a stored, uniformly spaced subset of
/// the integration times.  Immutable once returned from solve().
struct SolutionField {
  ModelGeometry geometry;
  SpatialGrid grid;
  SourceSpec source;
  std::vector<double> times;  // uniform spacing dt()
  std::vector<double> u;      // row-major times x space

  std::size_t n_times() const { return times.size(); }
  std::size_t n_space() const { return grid.count(); }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  double at(std::size_t ti, std::size_t xi) const {
    return u[ti * n_space() + xi];
  }
  std::span<const double> slice(std::size_t ti) const {
    return {u.data() + ti * n_space(), n_space()};
  }

  void write_csv(std::ostream& os, std::size_t time_stride = 1) const;
  void write_binary(std::ostream& os) const;
  static SolutionField read_binary(std::istream& is);
};

struct SolveOptions {
  double dt = 0.0;               // 0 selects the CFL-safe default
  int store_max_slices = 801;    // storage stride keeps at most this many
  double overflow_cap = 1e12;
  double cfl_limit_factor = 0.4; // precondition dt <= factor * (scaled h)^2
};

/// CFL-safe default step for the geometry/grid pair over [0, t_end].
double stable_dt(const ModelGeometry& geo, const SpatialGrid& grid, double t_end);

/// Method-of-lines RK2 (midpoint) integration of
///   u_t = Laplacian_{g(t)} u + reaction(u).
/// The first stored slice equals u0 exactly; positivity is enforced by
/// abort, never by clipping.
SolutionField solve(const ModelGeometry& geo, const SpatialGrid& grid,
                    const std::vector<double>& u0, const SourceSpec& source,
                    double t_end, const SolveOptions& opts = {});

/// f = log u and its metric-aware derivatives at an interior stored slice
/// (central time differencing needs both neighbors).
struct LogDerivatives {
  std::vector<double> f;
  std::vector<double> grad_sq;
  std::vector<double> f_t;
  std::vector<double> lap_f;
};

LogDerivatives log_derivatives(const SolutionField& field, std::size_t ti);

/// Worst-case margins of the source hypotheses |grad h|^2 <= delta2 h and
/// Lap h >= -delta3 (and h >= 0, delta1 >= max h) over the given times.
struct SourceValidation {
  double min_h = 0.0;
  double max_h = 0.0;
  double worst_grad_margin = 0.0;  // min over nodes of delta2*h - |grad h|^2
  double worst_lap_margin = 0.0;   // min over nodes of Lap h + delta3
  double delta1_margin = 0.0;      // delta1 - max h
  bool pass = false;
  std::string to_json() const;
};

SourceValidation validate_source(const ModelGeometry& geo, const SpatialGrid& grid,
                                 const SourceSpec& source,
                                 const std::vector<double>& times,
                                 double tol = 1e-9);

}  // namespace hlab
