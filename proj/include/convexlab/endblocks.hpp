#pragma once

#include "convexlab/domain.hpp"
#include "convexlab/poly.hpp"

namespace convexlab {

/// Integrated Hermite block at one end of the interval.
struct EndpointBlock {
  Poly poly;
  Side side = Side::kLeft;
  double h = 0.0;
  /// Block minus f at the inner end of the block (a + h or b - h).
  double delta = 0.0;
};

/// Ratio between consecutive candidate widths in find_H.
inline constexpr double kThresholdLadderFactor = 2.0;

/// Degree <= r + 1 polynomial matching f^(nu)(a), nu = 0..r, and f(a + h).
Poly lagrange_hermite_L(const ConvexOracle& f, double a, double h, int r);

/// Antiderivative of lagrange_hermite_L(f', a, h, r - 1) through (a, f(a)).
EndpointBlock integrated_L(const ConvexOracle& f, double a, double h, int r);

/// Mirror image of integrated_L at the right end b, built on [b - h, b].
EndpointBlock mirrored_L(const ConvexOracle& f, double b, double h, int r);

/// Largest h = h_max 2^-i, i = 0..60, for which both blocks are certified
/// convex at widths h and h/2. Throws kNoConvexityThreshold otherwise.
double find_H(const ConvexOracle& f, Interval on, int r, double h_max);

}  // namespace convexlab
