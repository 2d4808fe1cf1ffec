#include "convexlab/endblocks.hpp"

#include <cmath>

#include "convexlab/error.hpp"

namespace convexlab {

namespace {

void check_block_args(const ConvexOracle& f, double h, int r, int min_r) {
  if (!(h > 0.0)) throw Error(ErrorCode::kInvalidArgument, "endpoint block: h must be positive");
  if (r < min_r) throw Error(ErrorCode::kInvalidOrder, "endpoint block: r too small");
  if (r > f.smoothness()) {
    throw Error(ErrorCode::kInvalidOrder, "endpoint block: r exceeds the smoothness of f");
  }
}

}  // namespace

Poly lagrange_hermite_L(const ConvexOracle& f, double a, double h, int r) {
  check_block_args(f, h, r, 0);
  std::vector<double> at_a(static_cast<std::size_t>(r) + 1);
  for (int nu = 0; nu <= r; ++nu) at_a[nu] = f.derivative(nu, a);
  const HermiteNode nodes[] = {{a, std::move(at_a)}, {a + h, {f(a + h)}}};
  return hermite_interpolant(nodes);
}

EndpointBlock integrated_L(const ConvexOracle& f, double a, double h, int r) {
  check_block_args(f, h, r, 1);
  std::vector<double> at_a(static_cast<std::size_t>(r));
  for (int nu = 1; nu <= r; ++nu) at_a[nu - 1] = f.derivative(nu, a);
  const HermiteNode nodes[] = {{a, std::move(at_a)}, {a + h, {f.derivative(1, a + h)}}};
  EndpointBlock block;
  block.poly = hermite_interpolant(nodes).antiderivative(a, f(a));
  block.side = Side::kLeft;
  block.h = h;
  block.delta = block.poly(a + h) - f(a + h);
  return block;
}

EndpointBlock mirrored_L(const ConvexOracle& f, double b, double h, int r) {
  // g(x) = f(2b - x) puts the right end of f at the left end of g, at x = b.
  const EndpointBlock left = integrated_L(f.reflected(b), b, h, r);
  EndpointBlock block;
  block.poly = left.poly.reflected(b);
  block.side = Side::kRight;
  block.h = h;
  block.delta = left.delta;
  return block;
}

double find_H(const ConvexOracle& f, Interval on, int r, double h_max) {
  if (!(h_max > 0.0) || h_max > 0.5 * on.length() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::kInvalidArgument, "find_H: need 0 < h_max <= (b - a) / 2");
  }
  auto convex_at = [&](double h) {
    const EndpointBlock left = integrated_L(f, on.a, h, r);
    if (!convexity_certificate(left.poly, on.a, on.a + h).convex) return false;
    const EndpointBlock right = mirrored_L(f, on.b, h, r);
    return convexity_certificate(right.poly, on.b - h, on.b).convex;
  };
  double h = h_max;
  for (int i = 0; i <= 60; ++i) {
    const double half = h / kThresholdLadderFactor;
    if (on.a + half == on.a || on.b - half == on.b) break;
    if (convex_at(h) && convex_at(h / kThresholdLadderFactor)) return h;
    h /= kThresholdLadderFactor;
  }
  throw Error(ErrorCode::kNoConvexityThreshold,
              "find_H: no convex endpoint blocks on the ladder down to h_max * 2^-60");
}

}  // namespace convexlab
