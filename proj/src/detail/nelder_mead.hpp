#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace tailcausal::detail {

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x{};
  double value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead minimizer. Stops when the spread of function
/// values across the simplex drops below `ftol` (absolute + relative).
template <std::size_t N, class F>
SimplexResult<N> nelder_mead(F&& f, std::array<double, N> start, std::array<double, N> step,
                             double ftol = 1e-12, std::size_t max_iter = 5000) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> p;
  std::array<double, N + 1> v;
  p[0] = start;
  for (std::size_t i = 0; i < N; ++i) {
    p[i + 1] = start;
    p[i + 1][i] += step[i];
  }
  for (std::size_t i = 0; i <= N; ++i) v[i] = f(p[i]);

  auto lerp = [](const Point& a, const Point& b, double t) {
    Point r;
    for (std::size_t k = 0; k < N; ++k) r[k] = a[k] + t * (b[k] - a[k]);
    return r;
  };

  SimplexResult<N> out;
  std::array<std::size_t, N + 1> idx;
  for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
    for (std::size_t i = 0; i <= N; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    const std::size_t best = idx.front();
    const std::size_t worst = idx.back();
    const std::size_t second = idx[N - 1];

    if (std::isfinite(v[worst]) &&
        std::abs(v[worst] - v[best]) <= ftol * (1.0 + std::abs(v[best]))) {
      out.converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < N; ++k) centroid[k] += p[i][k] / static_cast<double>(N);
    }

    const Point reflected = lerp(centroid, p[worst], -1.0);
    const double fr = f(reflected);
    if (fr < v[best]) {
      const Point expanded = lerp(centroid, p[worst], -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        p[worst] = expanded;
        v[worst] = fe;
      } else {
        p[worst] = reflected;
        v[worst] = fr;
      }
      continue;
    }
    if (fr < v[second]) {
      p[worst] = reflected;
      v[worst] = fr;
      continue;
    }
    const bool outside = fr < v[worst];
    const Point contracted = outside ? lerp(centroid, reflected, 0.5) : lerp(centroid, p[worst], 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : v[worst])) {
      p[worst] = contracted;
      v[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= N; ++i) {
      if (i == best) continue;
      p[i] = lerp(p[best], p[i], 0.5);
      v[i] = f(p[i]);
    }
  }

  const std::size_t best = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  out.x = p[best];
  out.value = v[best];
  return out;
}

}  // namespace tailcausal::detail
