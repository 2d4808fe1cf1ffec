#include "doctest.h"

#include <cfloat>
#include <cmath>
#include <functional>

#include "convexlab/domain.hpp"
#include "convexlab/endblocks.hpp"
#include "convexlab/error.hpp"
#include "convexlab/smoothness.hpp"
#include "oracles.hpp"

using namespace convexlab;

namespace {

void check_poly_equals(const Poly& p, const std::function<double(double)>& g, double a, double b,
                       double tol = 1e-10) {
  for (int i = 0; i <= 20; ++i) {
    const double x = a + (b - a) * i / 20.0;
    CHECK(p(x) == doctest::Approx(g(x)).epsilon(tol).scale(1.0));
  }
}

// sup over x in the block (away from the anchor) of
// |f - P| / (d^r * one-sided omega_2(f^(r), x; block)), d the distance to the anchor.
// Rounding in f - P is removed first; 0/0 counts as 0.
double block_ratio(const ConvexOracle& f, const Poly& p, double a, double b, int r, Side side) {
  const ScalarFunction top = f.derivative_function(r);
  double worst = 0.0;
  for (int i = 1; i <= 48; ++i) {
    const double d = (b - a) * i / 48.0;
    const double x = side == Side::kLeft ? a + d : b - d;
    const double err = std::abs(f(x) - p(x));
    const double eta = 4.0 * DBL_EPSILON * (std::abs(f(x)) + p.abs_eval(x));
    const double excess = std::max(0.0, err - eta);
    if (excess == 0.0) continue;
    const double w = one_sided_modulus(top, 2, x, a, b, side, 128, f.breakpoints());
    const double denom = std::max(std::pow(d, r) * w, 1e-300);
    worst = std::max(worst, excess / denom);
  }
  return worst;
}

struct Member {
  ConvexOracle f;
  std::vector<int> orders;
};

std::vector<Member> suite() {
  return {{oracles::exponential(1.0), {1, 2, 3}},
          {oracles::hyperbolic_cosine(2.0), {1, 2, 3}},
          {oracles::even_power(2), {1, 2, 3}},
          {oracles::sqrt_singular(1), {1}},
          {oracles::sqrt_singular(2), {2}},
          {oracles::sqrt_singular(3), {3}},
          {oracles::truncated_power(1, 0.1), {1}},
          {oracles::truncated_power(2, 0.1), {2}},
          {oracles::truncated_power(3, 0.1), {3}}};
}

enum class Block { kIntegrated, kLagrange, kMirrored };

double ratio_at(const ConvexOracle& f, int r, double h, Block which) {
  if (which == Block::kMirrored) {
    const EndpointBlock blk = mirrored_L(f, 1.0, h, r);
    return block_ratio(f, blk.poly, 1.0 - h, 1.0, r, Side::kRight);
  }
  const Poly p = which == Block::kIntegrated ? integrated_L(f, -1.0, h, r).poly
                                             : lagrange_hermite_L(f, -1.0, h, r);
  return block_ratio(f, p, -1.0, -1.0 + h, r, Side::kLeft);
}

void check_halving_stability(Block which) {
  for (const Member& m : suite()) {
    for (int r : m.orders) {
      double prev = ratio_at(m.f, r, 0.4, which);
      for (double h : {0.2, 0.1, 0.05}) {
        const double next = ratio_at(m.f, r, h, which);
        CAPTURE(m.f.family());
        CAPTURE(r);
        CAPTURE(h);
        CAPTURE(prev);
        CAPTURE(next);
        CHECK(std::isfinite(next));
        CHECK(next <= 1.5 * prev + 1e-9);
        prev = next;
      }
    }
  }
}

}  // namespace

TEST_CASE("lagrange-hermite polynomial: spot values") {
  const Poly sq = lagrange_hermite_L(oracles::even_power(1), 0.0, 1.0, 1);
  check_poly_equals(sq, [](double x) { return x * x; }, -1.0, 2.0);

  const ConvexOracle cube("cube", ConvexOracle::kSmoothAll, {-2.0, 2.0}, [](int k, double x) {
    return k == 0 ? x * x * x : k == 1 ? 3.0 * x * x : k == 2 ? 6.0 * x : k == 3 ? 6.0 : 0.0;
  });
  // Conditions p(0) = 0, p'(0) = 0, p(1) = 1 solved directly.
  const std::vector<double> ref = testref::monomial_interpolant({{0.0, 0, 0.0}, {0.0, 1, 0.0}, {1.0, 0, 1.0}});
  const Poly p = lagrange_hermite_L(cube, 0.0, 1.0, 1);
  check_poly_equals(p, [&](double x) { return testref::eval_monomials(ref, x); }, -1.0, 2.0);
  check_poly_equals(p, [](double x) { return x * x; }, -1.0, 2.0);

  const ConvexOracle cubic = oracles::polynomial({0.2, -0.1, 1.0, 0.3});
  for (int r : {2, 3}) {
    check_poly_equals(lagrange_hermite_L(cubic, -0.5, 0.3, r), [&](double x) { return cubic(x); }, -1.0, 1.0);
  }
}

TEST_CASE("integrated block of x^3") {
  const ConvexOracle cube("cube", ConvexOracle::kSmoothAll, {-2.0, 2.0}, [](int k, double x) {
    return k == 0 ? x * x * x : k == 1 ? 3.0 * x * x : k == 2 ? 6.0 * x : k == 3 ? 6.0 : 0.0;
  });
  for (double h : {1.0, 0.5, 0.1}) {
    const EndpointBlock blk = integrated_L(cube, 0.0, h, 1);
    CHECK(blk.side == Side::kLeft);
    CHECK(blk.h == h);
    check_poly_equals(blk.poly, [h](double x) { return 1.5 * h * x * x; }, 0.0, h);
    CHECK(blk.delta == doctest::Approx(0.5 * h * h * h));
  }

  // (1 - x)^3 on [0, 1] is the reflection of x^3.
  const ConvexOracle flip("flip", ConvexOracle::kSmoothAll, {-1.0, 2.0}, [](int k, double x) {
    const double y = 1.0 - x;
    return k == 0 ? y * y * y : k == 1 ? -3.0 * y * y : k == 2 ? 6.0 * y : k == 3 ? -6.0 : 0.0;
  });
  const double h = 0.4;
  const EndpointBlock right = mirrored_L(flip, 1.0, h, 1);
  CHECK(right.side == Side::kRight);
  check_poly_equals(right.poly, [h](double x) { return 1.5 * h * (1.0 - x) * (1.0 - x); }, 1.0 - h, 1.0);
  CHECK(right.delta == doctest::Approx(0.5 * h * h * h));
}

TEST_CASE("blocks reproduce polynomials of degree r + 1") {
  const ConvexOracle quartic = oracles::even_power(2);
  const ConvexOracle cubic = oracles::polynomial({0.1, 0.3, 1.0, 0.2});
  for (double h : {0.25, 0.6}) {
    const EndpointBlock l3 = integrated_L(quartic, -1.0, h, 3);
    check_poly_equals(l3.poly, [&](double x) { return quartic(x); }, -1.0, -1.0 + h, 1e-9);
    CHECK(l3.delta == doctest::Approx(0.0).scale(1e-9));
    const EndpointBlock m3 = mirrored_L(quartic, 1.0, h, 3);
    check_poly_equals(m3.poly, [&](double x) { return quartic(x); }, 1.0 - h, 1.0, 1e-9);
    CHECK(m3.delta == doctest::Approx(0.0).scale(1e-9));
    for (int r : {2, 3}) {
      const EndpointBlock c = integrated_L(cubic, -1.0, h, r);
      check_poly_equals(c.poly, [&](double x) { return cubic(x); }, -1.0, -1.0 + h, 1e-9);
    }
  }
}

TEST_CASE("block derivative conditions") {
  const ConvexOracle e = oracles::exponential(1.0);
  for (int r : {1, 2, 3}) {
    const double a = -1.0;
    const double h = 0.1;
    const EndpointBlock blk = integrated_L(e, a, h, r);
    for (int nu = 0; nu <= r; ++nu) {
      CHECK(blk.poly.derivative(nu)(a) == doctest::Approx(e.derivative(nu, a)).epsilon(1e-9));
    }
    CHECK(blk.poly.derivative()(a + h) == doctest::Approx(e.derivative(1, a + h)).epsilon(1e-10));
    CHECK(blk.delta == doctest::Approx(blk.poly(a + h) - e(a + h)).scale(1e-15));

    const EndpointBlock m = mirrored_L(e, 1.0, h, r);
    for (int nu = 0; nu <= r; ++nu) {
      CHECK(m.poly.derivative(nu)(1.0) == doctest::Approx(e.derivative(nu, 1.0)).epsilon(1e-9));
    }
    CHECK(m.poly.derivative()(1.0 - h) == doctest::Approx(e.derivative(1, 1.0 - h)).epsilon(1e-10));
  }
}

TEST_CASE("mirrored block of an even function reflects the left block") {
  const ConvexOracle c = oracles::hyperbolic_cosine(1.5);
  for (int r : {1, 2}) {
    const Poly left = integrated_L(c, -1.0, 0.3, r).poly;
    const Poly right = mirrored_L(c, 1.0, 0.3, r).poly;
    check_poly_equals(right, [&](double x) { return left(-x); }, 0.7, 1.0, 1e-12);
  }
}

TEST_CASE("find_H: ladder top for polynomials and exp") {
  const double h_max = 0.25;
  CHECK(find_H(oracles::even_power(1), {0.0, 1.0}, 1, h_max) == h_max);
  CHECK(find_H(oracles::even_power(2), {-1.0, 1.0}, 3, h_max) == h_max);
  CHECK(find_H(oracles::exponential(1.0), {-1.0, 1.0}, 1, h_max) == h_max);
  CHECK(find_H(oracles::exponential(3.0), {-1.0, 1.0}, 1, h_max) == h_max);
  CHECK_THROWS_AS(find_H(oracles::exponential(1.0), {-1.0, 1.0}, 1, 1.5), Error);
}

TEST_CASE("find_H: result is certified and on the ladder") {
  for (const Member& m : {Member{oracles::truncated_power(2, 0.05), {1, 2}},
                          Member{oracles::sqrt_singular(2), {1, 2}},
                          Member{oracles::hyperbolic_cosine(3.0), {1, 2, 3}}}) {
    for (int r : m.orders) {
      const double H = find_H(m.f, {-1.0, 1.0}, r, 0.5);
      CAPTURE(m.f.family());
      CAPTURE(r);
      REQUIRE(H > 0.0);
      const double steps = std::log2(0.5 / H);
      CHECK(steps == doctest::Approx(std::round(steps)));
      for (double h : {H, 0.5 * H}) {
        CHECK(convexity_certificate(integrated_L(m.f, -1.0, h, r).poly, -1.0, -1.0 + h).convex);
        CHECK(convexity_certificate(mirrored_L(m.f, 1.0, h, r).poly, 1.0 - h, 1.0).convex);
      }
    }
  }
}

TEST_CASE("find_H: first-order blocks of convex f are always convex") {
  // The second derivative of the block is the difference quotient of f'.
  for (double eps : {0.1, 0.01, 0.001}) {
    CHECK(find_H(oracles::truncated_power(1, eps), {-1.0, 1.0}, 1, 0.5) == 0.5);
  }
}

TEST_CASE("find_H shrinks with the truncated-power parameter") {
  for (int r : {2, 3}) {
    double prev = INFINITY;
    double first = 0.0;
    double last = 0.0;
    for (double eps : {0.1, 0.01, 0.001}) {
      const double H = find_H(oracles::truncated_power(r, eps), {-1.0, 1.0}, r, 0.5);
      CAPTURE(r);
      CAPTURE(eps);
      CAPTURE(H);
      CHECK(H < prev);
      if (eps == 0.1) first = H;
      last = H;
      prev = H;
    }
    CHECK(last < first);
  }
}

TEST_CASE("find_H reports inconsistent derivative data") {
  // Claims convexity but the slope data contradicts the values.
  const ConvexOracle liar("liar", 1, {-1.0, 1.0}, [](int k, double x) {
    return k == 0 ? x * x : k == 1 ? -8.0 * x : 0.0;
  });
  try {
    find_H(liar, {-1.0, 1.0}, 1, 0.5);
    FAIL("expected NoConvexityThreshold");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoConvexityThreshold);
  }
}

TEST_CASE("interpolatory error ratio is stable under halving: integrated block") {
  check_halving_stability(Block::kIntegrated);
}

TEST_CASE("interpolatory error ratio is stable under halving: lagrange-hermite") {
  check_halving_stability(Block::kLagrange);
}

TEST_CASE("interpolatory error ratio is stable under halving: mirrored block") {
  check_halving_stability(Block::kMirrored);
}
