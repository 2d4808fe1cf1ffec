#pragma once

#include <span>
#include <vector>

namespace convexlab {

/// A polynomial stored in local coordinates u = (x - center) / halfwidth.
///
/// Coefficients are in ascending degree in u. Keeping every piece in the frame
/// of its own interval keeps the coefficient magnitudes comparable regardless
/// of how small the interval is, which matters for the endpoint intervals of
/// Chebyshev partitions.
class Poly {
 public:
  Poly() : Poly(0.0, 1.0, {0.0}) {}
  Poly(double center, double halfwidth, std::vector<double> coeffs);

  /// Constant polynomial in the frame (center, halfwidth).
  static Poly constant(double value, double center = 0.0, double halfwidth = 1.0);
  /// The line intercept + slope * x, expressed in the frame (center, halfwidth).
  static Poly line(double slope, double intercept, double center = 0.0, double halfwidth = 1.0);
  /// Global monomial coefficients sum_i c_i x^i, expressed in the given frame.
  static Poly from_monomials(std::span<const double> coeffs, double center = 0.0,
                             double halfwidth = 1.0);

  double center() const noexcept { return center_; }
  double halfwidth() const noexcept { return halfwidth_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  double local(double x) const noexcept { return (x - center_) / halfwidth_; }
  double operator()(double x) const noexcept;
  /// Horner on |coeffs| at |u|; bounds the magnitude of the rounding in operator().
  double abs_eval(double x) const noexcept;

  /// d/dx; the chain-rule factor 1/halfwidth is folded into the coefficients.
  Poly derivative() const;
  Poly derivative(int order) const;
  /// q with q' = *this and q(x0) = y0.
  Poly antiderivative(double x0, double y0) const;

  /// Same function, re-expressed in another frame.
  Poly rebased(double center, double halfwidth) const;
  /// x -> p(2 * pivot - x).
  Poly reflected(double pivot) const;
  /// Global monomial coefficients; only sensible for frames near the origin.
  std::vector<double> monomials() const;

  Poly operator+(const Poly& other) const;
  Poly operator-(const Poly& other) const;
  Poly operator*(double s) const;
  Poly operator+(double s) const;

 private:
  double center_;
  double halfwidth_;
  std::vector<double> coeffs_;
};

/// One interpolation node: abscissa plus the value and consecutive derivatives
/// f(x), f'(x), ... to be matched there.
struct HermiteNode {
  double x;
  std::vector<double> derivatives;
};

/// Confluent (Lagrange-Hermite) interpolant of degree <= m - 1, m being the
/// total number of conditions. Built from a divided-difference table in the
/// local frame centered at the midpoint of the node range.
///
/// Throws kDegenerateNodes when two nodes share an abscissa and
/// kIllConditioned when the table produces non-finite entries.
Poly hermite_interpolant(std::span<const HermiteNode> nodes);

struct ConvexityCertificate {
  bool convex = true;
  double min_second_derivative = 0.0;
  double witness_x = 0.0;
  double max_abs_second_derivative = 0.0;
  double tolerance = 0.0;
};

/// Relative slack used when deciding convexity: 1e-9 * (1 + max |p''|).
inline constexpr double kConvexityRelTol = 1e-9;

/// Global minimum of p'' on [a, b], located through the critical points of p''.
/// Closed form when p''' is at most quadratic, otherwise by recursive root
/// isolation of p''' with derivative-bound pruning.
ConvexityCertificate convexity_certificate(const Poly& p, double a, double b);

/// Real roots of p in [a, b] (p in any frame), sorted. Used for p''' above.
std::vector<double> real_roots(const Poly& p, double a, double b);

}  // namespace convexlab
