#include "hlab/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

#include "hlab/detail/format.hpp"

namespace hlab {

std::string to_string(SourceKind k) {
  switch (k) {
    case SourceKind::None: return "none";
    case SourceKind::Power: return "power";
    case SourceKind::Log: return "log";
  }
  return "?";
}

SourceSpec SourceSpec::power(double l, double h_const, double d1, double d2,
                             double d3, PowerExponent exponent) {
  SourceSpec s;
  s.kind = SourceKind::Power;
  s.l = l;
  s.h_const = h_const;
  s.delta1 = d1;
  s.delta2 = d2;
  s.delta3 = d3;
  s.exponent = exponent;
  return s;
}

SourceSpec SourceSpec::power_field(double l, std::function<double(double, double)> h,
                                   double d1, double d2, double d3,
                                   PowerExponent exponent) {
  SourceSpec s = power(l, 0.0, d1, d2, d3, exponent);
  s.h_field = std::move(h);
  return s;
}

SourceSpec SourceSpec::log_reaction(double a) {
  SourceSpec s;
  s.kind = SourceKind::Log;
  s.a = a;
  return s;
}

double SourceSpec::reaction_per_u(double u, double x, double t) const {
  switch (kind) {
    case SourceKind::None: return 0.0;
    case SourceKind::Power: {
      const double e = exponent == PowerExponent::UPowL ? l - 1.0 : l - 2.0;
      return h_at(x, t) * std::pow(u, e);
    }
    case SourceKind::Log: return a * std::log(u);
  }
  return 0.0;
}

double SourceSpec::reaction(double u, double x, double t) const {
  return u * reaction_per_u(u, x, t);
}

SolveAborted::SolveAborted(Reason r, double t_reached)
    : std::runtime_error(std::string("solve aborted (") +
                         (r == Reason::PositivityLost ? "positivity lost"
                                                      : "overflow") +
                         ") at t=" + fmt17(t_reached)),
      reason_(r), t_reached_(t_reached) {}

double stable_dt(const ModelGeometry& geo, const SpatialGrid& grid, double t_end) {
  const double h = grid.spacing;
  if (geo.kind() == GeometryKind::FlatTorus) return 0.35 * h * h;
  // The pole rows carry an effective diffusivity n/scale; the metric is
  // smallest at t_end.
  const double s_min = geo.metric_scale(t_end);
  return 0.35 * s_min * h * h / geo.dim();
}

SolutionField solve(const ModelGeometry& geo, const SpatialGrid& grid,
                    const std::vector<double>& u0, const SourceSpec& source,
                    double t_end, const SolveOptions& opts) {
  const std::size_t N = grid.count();
  if (u0.size() != N) throw std::invalid_argument("solve: u0 size mismatch");
  for (double v : u0)
    if (!(v > 0.0)) throw std::invalid_argument("solve: u0 must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("solve: t_end must be > 0");
  if (t_end > geo.t_max() * (1.0 + 1e-12))
    throw std::domain_error("solve: t_end beyond geometry t_max");

  double dt = opts.dt > 0.0 ? opts.dt : stable_dt(geo, grid, t_end);
  const double h_scaled =
      grid.spacing * std::sqrt(geo.metric_scale(std::min(t_end, geo.t_max())));
  if (dt > opts.cfl_limit_factor * h_scaled * h_scaled * (1.0 + 1e-12))
    throw StabilityViolated("solve: dt=" + fmt17(dt) + " violates dt <= " +
                            fmt17(opts.cfl_limit_factor) + "*(scaled spacing)^2");

  std::size_t n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  n_steps = std::max<std::size_t>(n_steps, 1);
  std::size_t stride = 1;
  const std::size_t max_slices =
      std::max<std::size_t>(2, static_cast<std::size_t>(opts.store_max_slices));
  while (n_steps / stride + 1 > max_slices) ++stride;
  n_steps = ((n_steps + stride - 1) / stride) * stride;  // land on a stored slice
  dt = t_end / static_cast<double>(n_steps);

  SolutionField field;
  field.geometry = geo;
  field.grid = grid;
  field.source = source;
  const std::size_t n_stored = n_steps / stride + 1;
  field.times.reserve(n_stored);
  field.u.reserve(n_stored * N);

  std::vector<double> u = u0;
  std::vector<double> lap(N), stage(N);
  const auto& x = grid.points;

  auto store = [&](std::size_t step) {
    field.times.push_back(dt * static_cast<double>(step) * 1.0);
    field.u.insert(field.u.end(), u.begin(), u.end());
  };
  auto check = [&](const std::vector<double>& v, double t_reached) {
    for (double val : v) {
      if (!(val > 0.0) || std::isnan(val))
        throw SolveAborted(SolveAborted::Reason::PositivityLost, t_reached);
      if (val > opts.overflow_cap)
        throw SolveAborted(SolveAborted::Reason::Overflow, t_reached);
    }
  };

  store(0);
  for (std::size_t step = 0; step < n_steps; ++step) {
    const double t = dt * static_cast<double>(step);
    // midpoint RK2 with the metric evaluated at the stage times
    laplacian_apply(geo, grid, u, t, lap);
    for (std::size_t i = 0; i < N; ++i)
      stage[i] = u[i] + 0.5 * dt * (lap[i] + source.reaction(u[i], x[i], t));
    check(stage, t);
    const double t_mid = t + 0.5 * dt;
    laplacian_apply(geo, grid, stage, t_mid, lap);
    for (std::size_t i = 0; i < N; ++i)
      u[i] += dt * (lap[i] + source.reaction(stage[i], x[i], t_mid));
    check(u, t + dt);
    if ((step + 1) % stride == 0) store(step + 1);
  }
  // fix the exact stored times (avoid accumulated dt*step rounding drift)
  for (std::size_t k = 0; k < field.times.size(); ++k)
    field.times[k] = t_end * static_cast<double>(k * stride) /
                     static_cast<double>(n_steps);
  return field;
}

LogDerivatives log_derivatives(const SolutionField& field, std::size_t ti) {
  const std::size_t nt = field.n_times();
  if (ti < 1 || ti + 1 >= nt)
    throw std::out_of_range("log_derivatives: ti must be interior");
  const std::size_t N = field.n_space();
  LogDerivatives d;
  d.f.resize(N);
  d.grad_sq.resize(N);
  d.f_t.resize(N);
  d.lap_f.resize(N);
  const double t = field.times[ti];
  const double two_dt = field.times[ti + 1] - field.times[ti - 1];
  const auto um = field.slice(ti - 1);
  const auto uc = field.slice(ti);
  const auto up = field.slice(ti + 1);
  for (std::size_t i = 0; i < N; ++i) {
    d.f[i] = std::log(uc[i]);
    d.f_t[i] = (std::log(up[i]) - std::log(um[i])) / two_dt;
  }
  gradient_sq(field.geometry, field.grid, d.f, t, d.grad_sq);
  laplacian_apply(field.geometry, field.grid, d.f, t, d.lap_f);
  return d;
}

SourceValidation validate_source(const ModelGeometry& geo, const SpatialGrid& grid,
                                 const SourceSpec& source,
                                 const std::vector<double>& times, double tol) {
  if (source.kind != SourceKind::Power)
    throw std::invalid_argument("validate_source: power sources only");
  const std::size_t N = grid.count();
  SourceValidation rep;
  rep.min_h = std::numeric_limits<double>::infinity();
  rep.max_h = -rep.min_h;
  rep.worst_grad_margin = rep.min_h;
  rep.worst_lap_margin = rep.min_h;
  std::vector<double> h(N), gsq(N), lap(N);
  for (double t : times) {
    for (std::size_t i = 0; i < N; ++i) h[i] = source.h_at(grid.points[i], t);
    gradient_sq(geo, grid, h, t, gsq);
    laplacian_apply(geo, grid, h, t, lap);
    for (std::size_t i = 0; i < N; ++i) {
      rep.min_h = std::min(rep.min_h, h[i]);
      rep.max_h = std::max(rep.max_h, h[i]);
      rep.worst_grad_margin =
          std::min(rep.worst_grad_margin, source.delta2 * h[i] - gsq[i]);
      rep.worst_lap_margin =
          std::min(rep.worst_lap_margin, lap[i] + source.delta3);
    }
  }
  rep.delta1_margin = source.delta1 - rep.max_h;
  rep.pass = rep.min_h >= -tol && rep.worst_grad_margin >= -tol &&
             rep.worst_lap_margin >= -tol && rep.delta1_margin >= -tol;
  return rep;
}

void SolutionField::write_csv(std::ostream& os, std::size_t time_stride) const {
  os << "t,x,u\n";
  for (std::size_t ti = 0; ti < n_times(); ti += time_stride)
    for (std::size_t xi = 0; xi < n_space(); ++xi)
      os << fmt17(times[ti]) << ',' << fmt17(grid.points[xi]) << ','
         << fmt17(at(ti, xi)) << '\n';
}

namespace {

constexpr char kMagic[4] = {'H', 'L', 'D', '1'};

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("SolutionField: truncated binary dump");
  return v;
}

}  // namespace

void SolutionField::write_binary(std::ostream& os) const {
  if (source.h_field)
    throw std::invalid_argument(
        "write_binary: field-valued h cannot be serialized");
  os.write(kMagic, 4);
  put<std::uint32_t>(os, 1);  // version
  put<std::uint32_t>(os, geometry.kind() == GeometryKind::FlatTorus ? 0 : 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(geometry.dim()));
  put<double>(os, geometry.kind() == GeometryKind::FlatTorus ? geometry.side()
                                                             : geometry.t_max());
  put<std::uint32_t>(os, static_cast<std::uint32_t>(source.kind));
  put<std::uint32_t>(os, source.exponent == PowerExponent::UPowL ? 0 : 1);
  put<double>(os, source.l);
  put<double>(os, source.h_const);
  put<double>(os, source.a);
  put<double>(os, source.delta1);
  put<double>(os, source.delta2);
  put<double>(os, source.delta3);
  put<std::uint64_t>(os, n_times());
  put<std::uint64_t>(os, n_space());
  os.write(reinterpret_cast<const char*>(times.data()),
           static_cast<std::streamsize>(times.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(grid.points.data()),
           static_cast<std::streamsize>(grid.points.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(u.data()),
           static_cast<std::streamsize>(u.size() * sizeof(double)));
}

SolutionField SolutionField::read_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("SolutionField: bad magic");
  if (get<std::uint32_t>(is) != 1)
    throw std::runtime_error("SolutionField: unsupported dump version");
  const auto gkind = get<std::uint32_t>(is);
  const auto n = static_cast<int>(get<std::uint32_t>(is));
  const double geo_param = get<double>(is);
  SolutionField f;
  f.geometry = gkind == 0 ? ModelGeometry::flat_torus(n, geo_param)
                          : ModelGeometry::shrinking_sphere(n, geo_param);
  SourceSpec src;
  src.kind = static_cast<SourceKind>(get<std::uint32_t>(is));
  src.exponent = get<std::uint32_t>(is) == 0 ? PowerExponent::UPowL
                                             : PowerExponent::UPowLMinus1;
  src.l = get<double>(is);
  src.h_const = get<double>(is);
  src.a = get<double>(is);
  src.delta1 = get<double>(is);
  src.delta2 = get<double>(is);
  src.delta3 = get<double>(is);
  f.source = src;
  const auto nt = get<std::uint64_t>(is);
  const auto nx = get<std::uint64_t>(is);
  f.grid = SpatialGrid::make(f.geometry, static_cast<int>(nx));
  f.times.resize(nt);
  is.read(reinterpret_cast<char*>(f.times.data()),
          static_cast<std::streamsize>(nt * sizeof(double)));
  is.read(reinterpret_cast<char*>(f.grid.points.data()),
          static_cast<std::streamsize>(nx * sizeof(double)));
  f.u.resize(nt * nx);
  is.read(reinterpret_cast<char*>(f.u.data()),
          static_cast<std::streamsize>(f.u.size() * sizeof(double)));
  if (!is) throw std::runtime_error("SolutionField: truncated binary dump");
  return f;
}

}  // namespace hlab
