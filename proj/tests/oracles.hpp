#pragma once

// Independent reference implementations used only by tests. They favour
// the textbook formulation over speed and share no code with the library.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

// Recursive Cox-de Boor on an explicit knot vector, half-open spans.
inline double basis(const std::vector<double>& t, std::size_t i, int k, double x) {
  if (k == 0) return (t[i] <= x && x < t[i + 1]) ? 1.0 : 0.0;
  double v = 0.0;
  const double d1 = t[i + k] - t[i];
  const double d2 = t[i + k + 1] - t[i + 1];
  if (d1 > 0) v += (x - t[i]) / d1 * basis(t, i, k - 1, x);
  if (d2 > 0) v += (t[i + k + 1] - x) / d2 * basis(t, i + 1, k - 1, x);
  return v;
}

// Uniform extended knot vector: G spans over [lo, hi] plus k more per side.
inline std::vector<double> uniform_knots(double lo, double hi, int g, int k) {
  std::vector<double> t;
  for (int i = -k; i <= g + k; ++i) t.push_back(lo + (hi - lo) * i / g);
  return t;
}

inline std::vector<double> all_basis(double lo, double hi, int g, int k, double x) {
  const auto t = uniform_knots(lo, hi, g, k);
  std::vector<double> out(static_cast<std::size_t>(g + k));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = basis(t, i, k, x);
  return out;
}

// Least squares through the normal equations in long double, solved by
// Gaussian elimination with partial pivoting. A is m x n, row-major.
inline std::vector<double> normal_equations(const std::vector<double>& a, std::size_t m, std::size_t n,
                                            const std::vector<double>& b) {
  std::vector<long double> g(n * (n + 1), 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      long double s = 0;
      for (std::size_t r = 0; r < m; ++r) s += static_cast<long double>(a[r * n + i]) * a[r * n + j];
      g[i * (n + 1) + j] = s;
    }
    long double s = 0;
    for (std::size_t r = 0; r < m; ++r) s += static_cast<long double>(a[r * n + i]) * b[r];
    g[i * (n + 1) + n] = s;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(g[r * (n + 1) + c]) > std::fabs(g[p * (n + 1) + c])) p = r;
    }
    if (g[p * (n + 1) + c] == 0) throw std::runtime_error("oracle: singular normal equations");
    for (std::size_t j = 0; j <= n; ++j) std::swap(g[c * (n + 1) + j], g[p * (n + 1) + j]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const long double f = g[r * (n + 1) + c] / g[c * (n + 1) + c];
      for (std::size_t j = c; j <= n; ++j) g[r * (n + 1) + j] -= f * g[c * (n + 1) + j];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(g[i * (n + 1) + n] / g[i * (n + 1) + i]);
  return x;
}

// Central difference of f with respect to params[i].
inline double central_difference(const std::function<double()>& f, std::vector<double>& params, std::size_t i,
                                 double h) {
  const double saved = params[i];
  params[i] = saved + h;
  const double up = f();
  params[i] = saved - h;
  const double down = f();
  params[i] = saved;
  return (up - down) / (2 * h);
}

// Richardson extrapolation of two central differences (h and h/2): O(h^4)
// truncation with far less roundoff than a single tiny step.
inline double richardson_difference(const std::function<double()>& f, std::vector<double>& params, std::size_t i,
                                    double h) {
  const double coarse = central_difference(f, params, i, h);
  const double fine = central_difference(f, params, i, h / 2);
  return (4 * fine - coarse) / 3;
}

// Relative agreement, falling back to absolute when both sides are tiny.
inline bool close(double analytic, double numeric, double rel, double tiny = 1e-8) {
  const double scale = std::max(std::fabs(analytic), std::fabs(numeric));
  if (scale < tiny) return std::fabs(analytic - numeric) <= tiny;
  return std::fabs(analytic - numeric) <= rel * scale;
}

}  // namespace oracle
