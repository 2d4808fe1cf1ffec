#pragma once

#include <vector>

#include "convexlab/domain.hpp"
#include "convexlab/poly.hpp"

namespace convexlab {

/// Continuous piecewise polynomial: pieces()[i] lives on [x_i, x_{i+1}], each in
/// the local frame of its own interval.
class PiecewisePoly {
 public:
  PiecewisePoly(Partition knots, std::vector<Poly> pieces, int order);

  const Partition& knots() const noexcept { return knots_; }
  const std::vector<Poly>& pieces() const noexcept { return pieces_; }
  int order() const noexcept { return order_; }
  bool convex_certified() const noexcept { return convex_certified_; }
  void set_convex_certified(bool v) noexcept { convex_certified_ = v; }

  double operator()(double x) const;
  double derivative(int order, double x) const;
  /// Derivative of the piece to the left (side = kLeft) or right of knot j.
  double one_sided_derivative(int order, int j, Side side) const;
  /// Largest |p_i(x_{i+1}) - p_{i+1}(x_{i+1})| over interior knots.
  double max_seam_mismatch() const;
  /// Largest |value| at the knots, used as the scale for absolute tolerances.
  double knot_scale() const;

 private:
  const Poly& piece_at(double x) const;

  Partition knots_;
  std::vector<Poly> pieces_;
  int order_;
  bool convex_certified_ = false;
};

struct KnotSlopeCheck {
  int knot = 0;
  double left_slope = 0.0;
  double right_slope = 0.0;
  bool ok = true;
};

struct ConvexityReport {
  bool convex = true;
  std::vector<ConvexityCertificate> pieces;
  std::vector<KnotSlopeCheck> knots;
  std::vector<int> offending_pieces;
  std::vector<int> offending_knots;
  double slope_tolerance = 0.0;
};

/// Exact per-piece certificates plus nondecreasing one-sided slopes at every
/// interior knot, the latter up to 1e-9 times the largest knot slope.
ConvexityReport verify_convexity(const PiecewisePoly& s);

}  // namespace convexlab
