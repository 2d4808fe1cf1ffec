#pragma once

#include "convexlab/domain.hpp"
#include "convexlab/piecewise.hpp"
#include "convexlab/poly.hpp"

namespace convexlab {

/// How a piece was finally obtained.
enum class PieceFallback {
  kNone,       // linear program, certified on the first solve
  kTightened,  // re-solved with a positive curvature floor
  kBlended,    // minimal convex combination with the parabola
  kParabola,   // the explicit parabola
  kSecant,     // degenerate interval or affine data
  kStalled,    // simplex hit its iteration cap; parabola used
};

const char* piece_fallback_name(PieceFallback f) noexcept;

/// A convex polynomial on one interval interpolating f at both ends with
/// p'(a) >= f'(a) and p'(b) <= f'(b).
struct ConvexPiece {
  Poly poly;
  Interval interval;
  double slack_left = 0.0;   // p'(a+) - f'(a)
  double slack_right = 0.0;  // f'(b) - p'(b-)
  PieceFallback fallback = PieceFallback::kNone;
  double sample_error = 0.0;  // max |f - p| on the fitting grid
};

/// The convex parabola through (a, f(a)), (b, f(b)) matching f' at one end.
/// Throws kNotConvexInput when the spot check of f on the interval fails.
ConvexPiece convex_parabola(const ConvexOracle& f, Interval on);

/// Convex piece of degree <= `degree` minimizing the sampled maximum error,
/// obtained from a linear program over the coefficients.
ConvexPiece convex_piece(const ConvexOracle& f, Interval on, int degree);

/// One convex_piece of degree r + 1 (at least 2) per interval of X.
PiecewisePoly build_sigma(const ConvexOracle& f, const Partition& X, int r);

/// Pieces for intervals [x_{first}, x_{first+1}], ..., [x_{last-1}, x_{last}].
std::vector<ConvexPiece> build_sigma_pieces(const ConvexOracle& f, const Partition& X, int r,
                                            int first, int last);

}  // namespace convexlab
