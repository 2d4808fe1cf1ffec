#pragma once

#include "convexlab/domain.hpp"
#include "convexlab/piecewise.hpp"

namespace convexlab {

struct GlueConfig {
  /// Upper bound for the constants of the endpoint-block error estimates; only
  /// enters the smallness test that fixes H1.
  double c0 = 16.0;
  /// Largest endpoint block width tried by find_H, on the normalized [0, 1].
  double h_max = 0.25;
};

/// Quantities of the construction, all on the normalized problem over [0, 1].
struct GlueTrace {
  double M = 0.0;
  double x_star = 0.0;
  double H1 = 0.0;
  double H = 0.0;
  double delta = 0.0;
  double delta_tilde = 0.0;
  double delta_hat = 0.0;
  int gluing_case = 1;
  double lambda = 1.0;
  double c0_used = 0.0;
  /// Set when f was (numerically) affine and the secant was returned.
  bool affine = false;
};

struct SplineResult {
  PiecewisePoly spline;
  GlueTrace trace;
};

struct ChebyshevResult {
  PiecewisePoly spline;
  GlueTrace trace;
  int n_threshold = 0;
};

/// Normalized thresholds: H (and M, x*, H1) for f on `on` without building a spline.
/// The returned H is in the units of the normalized problem.
GlueTrace admissible_width(const ConvexOracle& f, Interval on, int r, const GlueConfig& config = {});

/// Convex s of order r + 2 on X interpolating f and its first r derivatives at
/// both ends. Throws kPartitionTooCoarse (payload: admissible H in the units of
/// X) when the end intervals of X are too wide, kNotConvexOutput when the
/// assembled spline fails certification.
SplineResult construct_spline(const ConvexOracle& f, const Partition& X, int r,
                              const GlueConfig& config = {});

/// Smallest n with Chebyshev end gaps admissible for H (H measured on [-1, 1]):
/// ceil(3 / sqrt(H)).
int chebyshev_threshold(double H);

/// construct_spline on the Chebyshev partition of [-1, 1]; throws
/// kNBelowThreshold (payload: the threshold) when n is too small.
ChebyshevResult construct_chebyshev(const ConvexOracle& f, int r, int n,
                                    const GlueConfig& config = {});

/// Threshold only, without building the spline.
int chebyshev_threshold_for(const ConvexOracle& f, int r, const GlueConfig& config = {});

/// Piecewise linear interpolant of f at the Chebyshev knots.
PiecewisePoly polygonal_baseline(const ConvexOracle& f, int n);

}  // namespace convexlab
