#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "convexlab/smoothness.hpp"

namespace convexlab {

struct Interval {
  double a = -1.0;
  double b = 1.0;
  double length() const noexcept { return b - a; }
};

/// Strictly increasing knots x_0 < ... < x_n with n >= 2.
class Partition {
 public:
  explicit Partition(std::vector<double> knots);

  const std::vector<double>& knots() const noexcept { return knots_; }
  int n() const noexcept { return static_cast<int>(knots_.size()) - 1; }
  double operator[](int j) const { return knots_.at(static_cast<std::size_t>(j)); }
  /// Clamped access: x_0 for j < 0 and x_n for j > n.
  double knot(int j) const noexcept;
  double front() const noexcept { return knots_.front(); }
  double back() const noexcept { return knots_.back(); }
  /// Index j with x in [x_{j-1}, x_j], 1 <= j <= n.
  int interval_of(double x) const noexcept;

 private:
  std::vector<double> knots_;
};

/// t_j = -cos(j pi / n), j = 0..n, with the ends pinned to -1 and 1.
Partition chebyshev_partition(int n);
/// Chebyshev knots mapped affinely onto [a, b].
Partition chebyshev_partition(int n, Interval on);
Partition uniform_partition(int n, Interval on = {});
/// One knot per line, strictly increasing. Blank lines and '#' comments skipped.
Partition read_partition(const std::string& path);

double phi(double x) noexcept;
/// rho_n(x) = sqrt(1 - x^2) / n + 1 / n^2.
double rho(int n, double x);

/// A convex function of class C^r with exact derivative evaluators.
///
/// `smoothness` is the largest derivative order the evaluators are valid for;
/// asking for more throws. Smooth families report kSmoothAll.
class ConvexOracle {
 public:
  using Evaluator = std::function<double(int order, double x)>;
  static constexpr int kSmoothAll = 64;

  ConvexOracle(std::string family, int smoothness, Interval domain, Evaluator eval,
               std::vector<double> breakpoints = {});

  const std::string& family() const noexcept { return family_; }
  int smoothness() const noexcept { return smoothness_; }
  Interval domain() const noexcept { return domain_; }
  /// Abscissae where the highest derivative loses smoothness.
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  double operator()(double x) const { return eval_(0, x); }
  double derivative(int order, double x) const;
  ScalarFunction derivative_function(int order) const;

  /// x -> f(2 * pivot - x), on the reflected domain.
  ConvexOracle reflected(double pivot) const;
  /// f minus a line.
  ConvexOracle minus_line(double slope, double intercept) const;

 private:
  std::string family_;
  int smoothness_;
  Interval domain_;
  Evaluator eval_;
  std::vector<double> breakpoints_;
};

namespace oracles {
ConvexOracle exponential(double alpha);
ConvexOracle hyperbolic_cosine(double beta);
/// x^(2m).
ConvexOracle even_power(int m);
/// sum_i c_i x^i; throws kNotConvexInput if the spot check fails on [-1, 1].
ConvexOracle polynomial(std::vector<double> coeffs);
/// (1 + x)^(r + 1/2): C^r but not C^(r+1) at -1.
ConvexOracle sqrt_singular(int r);
/// max(0, x - 1 + eps)^(r + 1): C^r but not C^(r+1) at 1 - eps.
ConvexOracle truncated_power(int r, double eps);
}  // namespace oracles

/// Parse "family:key=value,key=value" (exp:alpha=1, cosh:beta=1, pow:m=2,
/// poly:coeffs=0,0,1, f0:r=2, truncpow:r=1,eps=0.01). Unknown families or keys
/// throw kParse.
ConvexOracle parse_oracle(std::string_view spec);

struct ConvexitySpotCheck {
  double min_curvature = 0.0;
  double max_abs_curvature = 0.0;
  bool passed = true;
};

/// Sampled convexity check on `samples` uniform points: f'' where the oracle
/// provides it, otherwise second difference quotients with a rounding
/// allowance. Passes when min curvature >= -1e-12 (1 + max |curvature|).
ConvexitySpotCheck convexity_spot_check(const ConvexOracle& f, Interval on, int samples = 1000);

/// x = shift + scale * u together with the subtracted secant l(u) = intercept + slope * u.
struct AffineMap {
  double scale = 1.0;
  double shift = 0.0;
  double slope = 0.0;
  double intercept = 0.0;

  double to_unit(double x) const noexcept { return (x - shift) / scale; }
  double to_original(double u) const noexcept { return shift + scale * u; }
  /// f(x) from g(u) at u = to_unit(x).
  double value_to_original(double u, double g) const noexcept { return g + intercept + slope * u; }
  /// f^(order)(x) from g^(order)(u).
  double derivative_to_original(int order, double u, double g_derivative) const;
};

struct Normalized {
  ConvexOracle g;
  AffineMap map;
};

/// g(u) = f(a + u (b - a)) - secant(u) on [0, 1], so that g(0) = g(1) = 0.
Normalized normalize_to_unit(const ConvexOracle& f, Interval on);

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double x) const noexcept { return intercept + slope * x; }
};

Line tangent_line(const ConvexOracle& f, double x0);

}  // namespace convexlab
