#pragma once

// Reference computations used by the tests. None of these touch the library's
// algorithms: interpolation is checked against a dense linear solve in the
// monomial basis, moduli against brute-force lattices, and so on.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace testref {

using Fn = std::function<double(double)>;

// Gaussian elimination with partial pivoting; A is row-major n x n.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    }
    if (A[piv][c] == 0.0) throw std::runtime_error("singular system");
    std::swap(A[piv], A[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double m = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= m * A[c][k];
      b[r] -= m * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
    x[i] = s / A[i][i];
  }
  return x;
}

// d^k/dx^k of x^j at x.
inline double monomial_derivative(int j, int k, double x) {
  if (k > j) return 0.0;
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= j - i;
  return c * std::pow(x, j - k);
}

struct Condition {
  double x;
  int order;
  double value;
};

// Monomial coefficients of the degree < conditions.size() polynomial meeting
// every (x, order, value) condition.
inline std::vector<double> monomial_interpolant(const std::vector<Condition>& cs) {
  const std::size_t m = cs.size();
  std::vector<std::vector<double>> A(m, std::vector<double>(m));
  std::vector<double> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      A[i][j] = monomial_derivative(static_cast<int>(j), cs[i].order, cs[i].x);
    }
    b[i] = cs[i].value;
  }
  return solve_dense(std::move(A), std::move(b));
}

inline double eval_monomials(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) s = s * x + c[i];
  return s;
}

inline double central_difference(const Fn& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Composite Simpson rule with an even number of panels.
inline double simpson(const Fn& f, double a, double b, int panels = 2000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double binom(int k, int i) {
  double c = 1.0;
  for (int j = 1; j <= i; ++j) c = c * (k - i + j) / j;
  return c;
}

// Brute-force lattice over step u in (0, t] and admissible centers x; no
// refinement, no breakpoint alignment.
inline double brute_modulus(const Fn& f, int k, double t, double a, double b, int nu, int nx) {
  double best = 0.0;
  for (int iu = 1; iu <= nu; ++iu) {
    const double u = t * iu / nu;
    const double half = 0.5 * k * u;
    if (2.0 * half > b - a) break;
    for (int ix = 0; ix <= nx; ++ix) {
      const double x = (a + half) + (b - a - 2.0 * half) * ix / nx;
      double d = 0.0;
      for (int i = 0; i <= k; ++i) {
        const double xi = std::clamp(x + (0.5 * k - i) * u, a, b);
        d += (i % 2 ? -1.0 : 1.0) * binom(k, i) * f(xi);
      }
      best = std::max(best, std::abs(d));
    }
  }
  return best;
}

inline double min_on_grid(const Fn& f, double a, double b, int samples) {
  double m = f(a);
  for (int i = 1; i <= samples; ++i) m = std::min(m, f(a + (b - a) * i / samples));
  return m;
}

inline double max_abs_diff(const Fn& f, const Fn& g, double a, double b, int samples) {
  double m = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double x = a + (b - a) * i / samples;
    m = std::max(m, std::abs(f(x) - g(x)));
  }
  return m;
}

}  // namespace testref
