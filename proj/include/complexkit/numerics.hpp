#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace complexkit {

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle difference into (-pi, pi].
inline double wrap_to_pi(double x) {
  x = std::fmod(x, 2.0 * kPi);
  if (x <= -kPi) x += 2.0 * kPi;
  if (x > kPi) x -= 2.0 * kPi;
  return x;
}

namespace detail {

inline double adaptive_simpson_step(const std::function<double(double)>& f,
                                    double a, double b, double fa, double fm,
                                    double fb, double whole, double tol,
                                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
    if (depth <= 0 && std::abs(delta) > 15.0 * tol)
      throw std::runtime_error("adaptive quadrature failed to converge");
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol,
                               depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol,
                               depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature with an absolute error target.
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double abs_tol,
                               int max_depth = 48) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    throw std::runtime_error("adaptive quadrature: non-finite integrand");
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, abs_tol,
                                       max_depth);
}

// Integrates uniformly sampled values with spacing dt. Composite Simpson;
// an odd interval count gets a Newton-Cotes 3/8 tail, so the rule stays
// fourth order for either parity. All weights are positive.
inline double integrate_uniform(const std::vector<double>& values, double dt) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * dt * (values[0] + values[1]);
  if (n == 3)
    return dt / 3.0 * (values[0] + 4.0 * values[1] + values[2]);
  std::size_t simpson_end = n - 1;  // index of the last Simpson node
  double tail = 0.0;
  if ((n - 1) % 2 != 0) {
    // 3/8 rule on the final three intervals.
    simpson_end = n - 4;
    tail = 3.0 * dt / 8.0 *
           (values[n - 4] + 3.0 * values[n - 3] + 3.0 * values[n - 2] +
            values[n - 1]);
  }
  double acc = 0.0;
  if (simpson_end > 0) {
    acc = values[0] + values[simpson_end];
    for (std::size_t i = 1; i < simpson_end; ++i)
      acc += (i % 2 == 0 ? 2.0 : 4.0) * values[i];
  }
  return dt / 3.0 * acc + tail;
}

// Composite Simpson with node doubling until two successive estimates agree
// to abs_tol. Starts at min_nodes (rounded up to an odd count).
inline double simpson_to_tolerance(const std::function<double(double)>& f,
                                   double a, double b, double abs_tol,
                                   std::size_t min_nodes = 1025,
                                   std::size_t max_nodes = (1u << 20) + 1) {
  if (a == b) return 0.0;
  std::size_t intervals = min_nodes - 1;
  if (intervals % 2 != 0) ++intervals;
  auto eval = [&](std::size_t m) {
    const double h = (b - a) / static_cast<double>(m);
    double acc = f(a) + f(b);
    for (std::size_t i = 1; i < m; ++i)
      acc += (i % 2 == 0 ? 2.0 : 4.0) * f(a + h * static_cast<double>(i));
    return h / 3.0 * acc;
  };
  double prev = eval(intervals);
  while (intervals * 2 + 1 <= max_nodes) {
    intervals *= 2;
    const double cur = eval(intervals);
    if (std::abs(cur - prev) <= abs_tol) return cur;
    prev = cur;
  }
  throw std::runtime_error("simpson_to_tolerance: node budget exhausted");
}

// Vertex value of the parabola through three equally spaced samples
// (y0, y1, y2). Used to sharpen grid extrema; the vertex is trusted only
// when it falls inside the sampled bracket.
inline double quadratic_vertex_value(double y0, double y1, double y2) {
  const double denom = y0 - 2.0 * y1 + y2;
  if (denom == 0.0) return y1;
  const double s = 0.5 * (y0 - y2) / denom;  // vertex offset in grid units
  if (s < -1.0 || s > 1.0) return y1;
  return y1 + 0.25 * (y2 - y0) * s;
}

}  // namespace complexkit
