#include "hlab/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hlab/detail/format.hpp"

namespace hlab {

std::string to_string(GeometryKind k) {
  return k == GeometryKind::FlatTorus ? "flat_torus" : "shrinking_sphere";
}

ModelGeometry ModelGeometry::flat_torus(int n, double side) {
  if (n < 1) throw std::invalid_argument("flat_torus: n must be >= 1");
  if (!(side > 0.0)) throw std::invalid_argument("flat_torus: side must be > 0");
  ModelGeometry g;
  g.kind_ = GeometryKind::FlatTorus;
  g.n_ = n;
  g.side_ = side;
  g.t_max_ = std::numeric_limits<double>::infinity();
  return g;
}

ModelGeometry ModelGeometry::shrinking_sphere(int n, double t_max) {
  if (n < 2) throw std::invalid_argument("shrinking_sphere: n must be >= 2");
  const double extinction = 1.0 / (2.0 * (n - 1));
  if (t_max < 0.0) t_max = 0.8 * extinction;
  if (!(t_max < extinction))
    throw std::invalid_argument("shrinking_sphere: t_max must be < 1/(2(n-1))");
  ModelGeometry g;
  g.kind_ = GeometryKind::ShrinkingSphere;
  g.n_ = n;
  g.t_max_ = t_max;
  return g;
}

void ModelGeometry::require_time(double t) const {
  if (t < 0.0 || t > t_max_ * (1.0 + 1e-12))
    throw std::domain_error("geometry: t=" + fmt17(t) + " outside [0, " +
                            fmt17(t_max_) + "]");
}

double ModelGeometry::metric_scale(double t) const {
  require_time(t);
  if (kind_ == GeometryKind::FlatTorus) return 1.0;
  return 1.0 - 2.0 * (n_ - 1) * t;
}

double ModelGeometry::ricci_bound(double horizon) const {
  require_time(horizon);
  if (kind_ == GeometryKind::FlatTorus) return 0.0;
  // Ricci eigenvalues are (n-1)/scale, increasing along the flow.
  return (n_ - 1) / metric_scale(horizon);
}

double ModelGeometry::distance(double x1, double x2, double t) const {
  require_time(t);
  if (kind_ == GeometryKind::FlatTorus) {
    double d = std::fabs(x1 - x2);
    d = std::fmod(d, side_);
    return std::min(d, side_ - d);
  }
  return std::sqrt(metric_scale(t)) * std::fabs(x1 - x2);
}

double ModelGeometry::coord_length() const {
  return kind_ == GeometryKind::FlatTorus ? side_ : std::numbers::pi;
}

std::string ModelGeometry::name() const {
  return to_string(kind_) + "(n=" + std::to_string(n_) + ")";
}

SpatialGrid SpatialGrid::make(const ModelGeometry& geo, int count) {
  if (count < 8) throw std::invalid_argument("SpatialGrid: count must be >= 8");
  SpatialGrid g;
  g.points.resize(count);
  const double h = geo.coord_length() / count;
  g.spacing = h;
  const double offset = geo.periodic() ? 0.0 : 0.5;
  for (int i = 0; i < count; ++i) g.points[i] = (i + offset) * h;
  return g;
}

void laplacian_apply(const ModelGeometry& geo, const SpatialGrid& grid,
                     std::span<const double> v, double t,
                     std::span<double> out) {
  const std::size_t N = grid.count();
  if (v.size() != N || out.size() != N)
    throw std::invalid_argument("laplacian_apply: size mismatch");
  const double h = grid.spacing;
  const double inv_h2 = 1.0 / (h * h);
  if (geo.kind() == GeometryKind::FlatTorus) {
    for (std::size_t i = 0; i < N; ++i) {
      const double vm = v[(i + N - 1) % N];
      const double vp = v[(i + 1) % N];
      out[i] = (vm - 2.0 * v[i] + vp) * inv_h2;
    }
    return;
  }
  const double inv_s = 1.0 / geo.metric_scale(t);
  const double nm1 = geo.dim() - 1;
  // Pole-adjacent rows: even reflection plus cot(theta) u_theta -> u_thth.
  out[0] = geo.dim() * (v[1] - v[0]) * inv_h2 * inv_s;
  out[N - 1] = geo.dim() * (v[N - 2] - v[N - 1]) * inv_h2 * inv_s;
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const double theta = grid.points[i];
    const double u_tt = (v[i - 1] - 2.0 * v[i] + v[i + 1]) * inv_h2;
    const double u_t = (v[i + 1] - v[i - 1]) / (2.0 * h);
    out[i] = (u_tt + nm1 * (std::cos(theta) / std::sin(theta)) * u_t) * inv_s;
  }
}

std::vector<double> laplacian(const ModelGeometry& geo, const SpatialGrid& grid,
                              const std::vector<double>& values, double t) {
  std::vector<double> out(values.size());
  laplacian_apply(geo, grid, values, t, out);
  return out;
}

void gradient_sq(const ModelGeometry& geo, const SpatialGrid& grid,
                 std::span<const double> v, double t, std::span<double> out) {
  const std::size_t N = grid.count();
  if (v.size() != N || out.size() != N)
    throw std::invalid_argument("gradient_sq: size mismatch");
  const double two_h = 2.0 * grid.spacing;
  if (geo.kind() == GeometryKind::FlatTorus) {
    for (std::size_t i = 0; i < N; ++i) {
      const double g = (v[(i + 1) % N] - v[(i + N - 1) % N]) / two_h;
      out[i] = g * g;
    }
    return;
  }
  const double inv_s = 1.0 / geo.metric_scale(t);
  for (std::size_t i = 0; i < N; ++i) {
    const double vm = (i == 0) ? v[0] : v[i - 1];
    const double vp = (i + 1 == N) ? v[N - 1] : v[i + 1];
    const double g = (vp - vm) / two_h;
    out[i] = g * g * inv_s;
  }
}

}  // namespace hlab
