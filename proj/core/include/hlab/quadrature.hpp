#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>

namespace hlab {

/// Composite Simpson rule on [a, b] with n nodes (n odd, >= 3).
template <std::invocable<double> F>
double simpson(F&& f, double a, double b, int n) {
  if (n < 3) throw std::invalid_argument("simpson: need at least 3 nodes");
  if (n % 2 == 0) ++n;
  const double h = (b - a) / (n - 1);
  double acc = f(a) + f(b);
  for (int i = 1; i < n - 1; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

struct QuadResult {
  double value = 0.0;
  double rel_change = 0.0;  // |I_2n - I_n| / max(|I_2n|, 1)
};

/// Simpson value at 2n-1 nodes together with the Richardson-style
/// disagreement against the n-node value.
template <std::invocable<double> F>
QuadResult simpson_checked(F&& f, double a, double b, int n) {
  const double coarse = simpson(f, a, b, n);
  const double fine = simpson(f, a, b, 2 * n - 1);
  return {fine, std::fabs(fine - coarse) / std::max(std::fabs(fine), 1.0)};
}

}  // namespace hlab
