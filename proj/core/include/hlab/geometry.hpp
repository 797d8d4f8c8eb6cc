#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace hlab {

enum class GeometryKind { FlatTorus, ShrinkingSphere };

std::string to_string(GeometryKind k);

/// A model manifold whose Ricci-flow evolution is known in closed form.
///
/// FlatTorus: flat metric, a fixed point of the flow; one periodic
/// coordinate x in [0, side).  ShrinkingSphere: round n-sphere with
/// g(t) = (1 - 2(n-1)t) g0, restricted to rotationally symmetric data in
/// the colatitude theta in (0, pi).
class ModelGeometry {
public:
  /// Default: unit-circumference flat torus placeholder; use the factories.
  ModelGeometry() = default;

  static ModelGeometry flat_torus(int n, double side);
  /// t_max < 0 selects the default 0.8/(2(n-1)), which keeps the metric
  /// scale >= 0.2.
  static ModelGeometry shrinking_sphere(int n, double t_max = -1.0);

  /// Scale factor of g(t) relative to g(0): 1 on the torus,
  /// 1 - 2(n-1)t on the sphere.
  double metric_scale(double t) const;

  /// Smallest K with |Ric(x,t)| <= K for all t in [0, horizon].
  double ricci_bound(double horizon) const;

  /// Geodesic distance between coordinates x1, x2 under g(t).
  double distance(double x1, double x2, double t) const;

  GeometryKind kind() const { return kind_; }
  int dim() const { return n_; }
  double t_max() const { return t_max_; }
  double side() const { return side_; }
  /// Coordinate extent: side for the torus, pi for the sphere.
  double coord_length() const;
  bool periodic() const { return kind_ == GeometryKind::FlatTorus; }
  std::string name() const;

private:
  void require_time(double t) const;

  GeometryKind kind_ = GeometryKind::FlatTorus;
  int n_ = 1;
  double side_ = 1.0;
  double t_max_ = std::numeric_limits<double>::infinity();
};

/// Uniform 1-D grid on the geometry's coordinate.  The torus uses nodes
/// x_i = i h (periodic); the sphere uses cell-centered colatitudes
/// theta_i = (i + 1/2) h, which exclude both poles.
struct SpatialGrid {
  std::vector<double> points;
  double spacing = 0.0;

  static SpatialGrid make(const ModelGeometry& geo, int count);
  std::size_t count() const { return points.size(); }
};

/// Second-order Laplace-Beltrami stencil of g(t) applied to nodal values.
/// Sphere rows next to a pole use the regularity condition u_theta -> 0
/// (even ghost reflection) and the replacement cot(theta) u_theta -> u_thth.
void laplacian_apply(const ModelGeometry& geo, const SpatialGrid& grid,
                     std::span<const double> values, double t,
                     std::span<double> out);

std::vector<double> laplacian(const ModelGeometry& geo, const SpatialGrid& grid,
                              const std::vector<double>& values, double t);

/// |grad f|^2 under g(t): f_x^2 on the torus, f_theta^2 / scale on the
/// sphere, with the same ghost treatment as the Laplacian.
void gradient_sq(const ModelGeometry& geo, const SpatialGrid& grid,
                 std::span<const double> values, double t,
                 std::span<double> out);

}  // namespace hlab
