#include "convexlab/glue.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "convexlab/endblocks.hpp"
#include "convexlab/error.hpp"
#include "convexlab/localconvex.hpp"

namespace convexlab {

namespace {

constexpr int kMinimumScan = 4096;
constexpr int kH1Halvings = 60;

void check_order(const ConvexOracle& f, int r) {
  if (r < 1) throw Error(ErrorCode::kInvalidOrder, "construction requires r >= 1");
  if (r > f.smoothness()) {
    throw Error(ErrorCode::kInvalidOrder, "r exceeds the smoothness of the function");
  }
}

double value_scale(const ConvexOracle& f, Interval on) {
  const double L = on.length();
  return std::max({std::abs(f(on.a)), std::abs(f(on.b)), L * std::abs(f.derivative(1, on.a)),
                   L * std::abs(f.derivative(1, on.b))});
}

// Leftmost minimizer of the scan, refined by golden section between its neighbours.
double locate_minimum(const ConvexOracle& g, double& argmin) {
  std::size_t best = 0;
  double best_value = g(0.0);
  for (int i = 1; i < kMinimumScan; ++i) {
    const double u = static_cast<double>(i) / (kMinimumScan - 1);
    const double v = g(u);
    if (v < best_value) {
      best_value = v;
      best = static_cast<std::size_t>(i);
    }
  }
  const double step = 1.0 / (kMinimumScan - 1);
  double lo = std::max(0.0, (static_cast<double>(best) - 1.0) * step);
  double hi = std::min(1.0, (static_cast<double>(best) + 1.0) * step);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double g1 = g(x1);
  double g2 = g(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    if (g1 <= g2) {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - kInvPhi * (hi - lo);
      g1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + kInvPhi * (hi - lo);
      g2 = g(x2);
    }
  }
  argmin = static_cast<double>(best) * step;
  double value = best_value;
  if (g1 < value) {
    value = g1;
    argmin = x1;
  }
  if (g2 < value) {
    value = g2;
    argmin = x2;
  }
  return value;
}

GlueTrace thresholds(const ConvexOracle& g, int r, double scale, const GlueConfig& config) {
  GlueTrace trace;
  trace.c0_used = config.c0;
  double x_star = 0.5;
  const double min_value = locate_minimum(g, x_star);
  trace.M = -min_value;
  trace.x_star = x_star;
  if (!(trace.M > 1e-12 * scale)) {
    trace.affine = true;
    trace.M = std::max(trace.M, 0.0);
    return trace;
  }

  const ModulusProfile omega2(g.derivative_function(r), 2, 0.0, 1.0, kDefaultModulusGrid,
                              g.breakpoints());
  double h = 0.5 * std::min(x_star, 1.0 - x_star);
  bool found = false;
  for (int i = 0; i <= kH1Halvings; ++i) {
    const bool shallow = std::max(-g(h), -g(1.0 - h)) < 0.5 * trace.M;
    const bool small = 4.0 * config.c0 * std::pow(h, r) * omega2(h) < trace.M;
    if (shallow && small) {
      found = true;
      break;
    }
    h *= 0.5;
  }
  if (!found) {
    throw Error(ErrorCode::kNoConvexityThreshold, "no admissible H1 after 60 halvings");
  }
  trace.H1 = h;
  trace.H = std::min(find_H(g, {0.0, 1.0}, r, config.h_max), trace.H1);
  return trace;
}

SplineResult affine_spline(const ConvexOracle& f, const Partition& X, int r, GlueTrace trace) {
  const double a = X.front();
  const double b = X.back();
  const double slope = (f(b) - f(a)) / (b - a);
  std::vector<Poly> pieces;
  for (int i = 0; i < X.n(); ++i) {
    const double xl = X[i];
    const double xr = X[i + 1];
    const double fl = f(a) + slope * (xl - a);
    const double fr = i + 1 == X.n() ? f(b) : f(a) + slope * (xr - a);
    pieces.emplace_back(0.5 * (xl + xr), 0.5 * (xr - xl), std::vector<double>{0.5 * (fl + fr), 0.5 * (fr - fl)});
  }
  PiecewisePoly s(X, std::move(pieces), r + 2);
  s.set_convex_certified(verify_convexity(s).convex);
  return {std::move(s), trace};
}

// The normalized problem only fixes M, x*, H1 and H. Blocks, sigma and the
// tangent-line blend commute with subtracting a line, so they are built on f
// itself; re-adding the secant afterwards would cancel digits near the ends.
SplineResult assemble(const ConvexOracle& f, const Partition& X, int r, GlueTrace trace) {
  if (trace.affine) return affine_spline(f, X, r, trace);
  const int n = X.n();
  const double a = X.front();
  const double b = X.back();
  const double L = b - a;
  const double x1 = X[1];
  const double xl = X[n - 1];

  const double slack = 1.0 + 1e-12;
  if ((x1 - a) / L > trace.H * slack || (b - xl) / L > trace.H * slack) {
    throw Error(ErrorCode::kPartitionTooCoarse,
                "end intervals of the partition exceed the admissible width H", trace.H * L);
  }

  const EndpointBlock left = integrated_L(f, a, x1 - a, r);
  const EndpointBlock right = mirrored_L(f, b, b - xl, r);
  trace.delta = left.poly(x1) - f(x1);
  trace.delta_tilde = right.poly(xl) - f(xl);
  trace.delta_hat = trace.delta - trace.delta_tilde;
  if (!(std::abs(trace.delta) < 0.25 * trace.M && std::abs(trace.delta_tilde) < 0.25 * trace.M)) {
    throw Error(ErrorCode::kPartitionTooCoarse,
                "endpoint block defects are not below M/4; refine near the endpoints",
                trace.H * L);
  }

  const Line l = tangent_line(f, x1);
  const Line lt = tangent_line(f, xl);
  const double gap_right = f(xl) - l(xl);
  const double gap_left = f(x1) - lt(x1);
  if (!(gap_right > 0.5 * trace.M && gap_left > 0.5 * trace.M)) {
    throw Error(ErrorCode::kPartitionTooCoarse,
                "tangent-line gaps are not above M/2; refine near the endpoints", trace.H * L);
  }

  Line base = l;
  double shift = trace.delta;
  if (trace.delta_hat >= 0.0) {
    trace.gluing_case = 1;
    trace.lambda = 1.0 - trace.delta_hat / gap_right;
  } else {
    trace.gluing_case = 2;
    trace.lambda = 1.0 + trace.delta_hat / gap_left;
    base = lt;
    shift = trace.delta_tilde;
  }

  std::vector<Poly> pieces;
  pieces.reserve(static_cast<std::size_t>(n));
  pieces.push_back(left.poly.rebased(0.5 * (a + x1), 0.5 * (x1 - a)));
  for (auto& piece : build_sigma_pieces(f, X, r, 1, n - 1)) {
    const Poly& p = piece.poly;
    const Poly blend = Poly::line((1.0 - trace.lambda) * base.slope,
                                  (1.0 - trace.lambda) * base.intercept + shift, p.center(),
                                  p.halfwidth());
    pieces.push_back(p * trace.lambda + blend);
  }
  pieces.push_back(right.poly.rebased(0.5 * (xl + b), 0.5 * (b - xl)));
  PiecewisePoly s(X, std::move(pieces), r + 2);

  const double scale = std::max(s.knot_scale(), value_scale(f, {a, b}));
  if (s.max_seam_mismatch() > 1e-9 * scale) {
    throw Error(ErrorCode::kNotConvexOutput, "assembled spline is discontinuous at a knot");
  }
  const ConvexityReport report = verify_convexity(s);
  if (!report.convex) {
    throw Error(ErrorCode::kNotConvexOutput, "assembled spline failed convexity certification");
  }
  s.set_convex_certified(true);
  return {std::move(s), trace};
}

}  // namespace

GlueTrace admissible_width(const ConvexOracle& f, Interval on, int r, const GlueConfig& config) {
  check_order(f, r);
  if (!(on.a < on.b)) throw Error(ErrorCode::kInvalidArgument, "interval requires a < b");
  if (!(config.c0 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "c0 must be positive");
  if (!(config.h_max > 0.0 && config.h_max <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "h_max must lie in (0, 1/2]");
  }
  const Normalized nz = normalize_to_unit(f, on);
  return thresholds(nz.g, r, value_scale(f, on), config);
}

SplineResult construct_spline(const ConvexOracle& f, const Partition& X, int r,
                              const GlueConfig& config) {
  return assemble(f, X, r, admissible_width(f, {X.front(), X.back()}, r, config));
}

int chebyshev_threshold(double H) {
  if (!(H > 0.0)) throw Error(ErrorCode::kInvalidArgument, "chebyshev_threshold: H must be positive");
  const double v = 3.0 / std::sqrt(H);
  const double n = std::ceil(v * (1.0 - 1e-12));
  if (n >= static_cast<double>(INT_MAX)) return INT_MAX;
  return std::max(2, static_cast<int>(n));
}

namespace {

int threshold_from_trace(const GlueTrace& trace) {
  // The normalized width maps back to [-1, 1] with a factor 2.
  return trace.affine ? 2 : chebyshev_threshold(2.0 * trace.H);
}

}  // namespace

int chebyshev_threshold_for(const ConvexOracle& f, int r, const GlueConfig& config) {
  return threshold_from_trace(admissible_width(f, {-1.0, 1.0}, r, config));
}

ChebyshevResult construct_chebyshev(const ConvexOracle& f, int r, int n, const GlueConfig& config) {
  if (n < 2) throw Error(ErrorCode::kInvalidN, "n must be at least 2");
  const GlueTrace trace = admissible_width(f, {-1.0, 1.0}, r, config);
  const int threshold = threshold_from_trace(trace);
  if (n < threshold) {
    throw Error(ErrorCode::kNBelowThreshold,
                "n is below the threshold N = " + std::to_string(threshold), threshold);
  }
  SplineResult res = assemble(f, chebyshev_partition(n), r, trace);
  return {std::move(res.spline), res.trace, threshold};
}

PiecewisePoly polygonal_baseline(const ConvexOracle& f, int n) {
  const Partition X = chebyshev_partition(n);
  std::vector<Poly> pieces;
  for (int i = 0; i < n; ++i) {
    const double fl = f(X[i]);
    const double fr = f(X[i + 1]);
    pieces.emplace_back(0.5 * (X[i] + X[i + 1]), 0.5 * (X[i + 1] - X[i]),
                        std::vector<double>{0.5 * (fl + fr), 0.5 * (fr - fl)});
  }
  PiecewisePoly s(X, std::move(pieces), 2);
  s.set_convex_certified(verify_convexity(s).convex);
  return s;
}

}  // namespace convexlab
