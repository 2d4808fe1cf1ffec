#include "convexlab/localconvex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "convexlab/error.hpp"
#include "convexlab/lp.hpp"

namespace convexlab {

const char* piece_fallback_name(PieceFallback f) noexcept {
  switch (f) {
    case PieceFallback::kNone: return "none";
    case PieceFallback::kTightened: return "tightened";
    case PieceFallback::kBlended: return "blended";
    case PieceFallback::kParabola: return "parabola";
    case PieceFallback::kSecant: return "secant";
    case PieceFallback::kStalled: return "stalled";
  }
  return "unknown";
}

namespace {

// Everything is expressed in v = (x - c) / w in [-1, 1]. A candidate is
// p = secant + (1 - v^2) q(v), so p(a) = f(a) and p(b) = f(b) hold by
// construction, and e = p - secant is what the program shapes.
struct Local {
  double a, b, c, w;
  double fa, fb, dfa, dfb;
  double ga, gb;  // slope room: e'(-1) >= ga, e'(1) <= gb (v-units)

  Local(const ConvexOracle& f, Interval on)
      : a(on.a), b(on.b), c(0.5 * (on.a + on.b)), w(0.5 * (on.b - on.a)) {
    fa = f(a);
    fb = f(b);
    dfa = f.derivative(1, a);
    dfb = f.derivative(1, b);
    ga = w * dfa - 0.5 * (fb - fa);
    gb = w * dfb - 0.5 * (fb - fa);
  }

  double x_of(double v) const {
    if (v <= -1.0) return a;
    if (v >= 1.0) return b;
    return std::clamp(c + w * v, a, b);
  }
  double secant(double v) const { return 0.5 * (fa + fb) + 0.5 * (fb - fa) * v; }

  Poly from_q(const std::vector<double>& q) const {
    std::vector<double> coeffs(q.size() + 2, 0.0);
    coeffs[0] = 0.5 * (fa + fb);
    coeffs[1] = 0.5 * (fb - fa);
    for (std::size_t i = 0; i < q.size(); ++i) {
      coeffs[i] += q[i];
      coeffs[i + 2] -= q[i];
    }
    return Poly(c, w, std::move(coeffs));
  }

  Poly secant_poly() const { return Poly(c, w, {0.5 * (fa + fb), 0.5 * (fb - fa)}); }

  // The explicit parabola: q constant, touching the slope constraint at one end.
  Poly parabola_poly() const { return from_q({ga + gb >= 0.0 ? 0.5 * ga : -0.5 * gb}); }
};

std::vector<double> lobatto(int count) {
  std::vector<double> pts(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    pts[k] = -std::cos(std::numbers::pi * k / (count - 1));
  }
  pts.front() = -1.0;
  pts.back() = 1.0;
  return pts;
}

double power(double v, int i) {
  double r = 1.0;
  for (int j = 0; j < i; ++j) r *= v;
  return r;
}

// Basis function (1 - v^2) v^i and its second derivative.
double basis_value(int i, double v) { return (1.0 - v * v) * power(v, i); }
double basis_curvature(int i, double v) {
  double val = -(i + 2.0) * (i + 1.0) * power(v, i);
  if (i >= 2) val += i * (i - 1.0) * power(v, i - 2);
  return val;
}

ConvexPiece finish(const ConvexOracle& f, const Local& d, Poly p, PieceFallback how,
                   const std::vector<double>& zeta) {
  ConvexPiece piece;
  piece.interval = {d.a, d.b};
  const Poly dp = p.derivative();
  piece.slack_left = dp(d.a) - d.dfa;
  piece.slack_right = d.dfb - dp(d.b);
  double err = 0.0;
  for (double v : zeta) {
    const double x = d.x_of(v);
    err = std::max(err, std::abs(f(x) - p(x)));
  }
  piece.sample_error = err;
  piece.poly = std::move(p);
  piece.fallback = how;
  return piece;
}

struct Solve {
  bool optimal = false;
  bool stalled = false;
  std::vector<double> q;
};

Solve solve_piece(const Local& d, int degree, const std::vector<double>& xi,
                  const std::vector<double>& zeta, const std::vector<double>& g, double scale,
                  double floor) {
  const int nq = degree - 1;
  const int nv = nq + 1;  // q coefficients, then tau
  double t0 = 0.0;
  for (double gv : g) t0 = std::max(t0, std::abs(gv) / scale);

  LinearProgram lp;
  lp.cost.assign(static_cast<std::size_t>(nv), 0.0);
  lp.cost[nq] = -1.0;
  lp.free.assign(static_cast<std::size_t>(nv), true);
  lp.free[nq] = false;

  // e'(-1) = 2 q(-1) >= ga and e'(1) = -2 q(1) <= gb.
  {
    std::vector<double> row(nv, 0.0);
    for (int i = 0; i < nq; ++i) row[i] = -2.0 * power(-1.0, i);
    lp.add_row(std::move(row), -d.ga / scale);
  }
  {
    std::vector<double> row(nv, 0.0);
    for (int i = 0; i < nq; ++i) row[i] = -2.0;
    lp.add_row(std::move(row), d.gb / scale);
  }
  for (double v : xi) {
    std::vector<double> row(nv, 0.0);
    for (int i = 0; i < nq; ++i) row[i] = -basis_curvature(i, v);
    lp.add_row(std::move(row), -floor);
  }
  // |g - e| <= t with t = t0 - tau, so the zero polynomial is feasible at tau = 0.
  for (std::size_t l = 0; l < zeta.size(); ++l) {
    std::vector<double> up(nv, 0.0);
    std::vector<double> down(nv, 0.0);
    for (int i = 0; i < nq; ++i) {
      const double bv = basis_value(i, zeta[l]);
      up[i] = bv;
      down[i] = -bv;
    }
    up[nq] = 1.0;
    down[nq] = 1.0;
    lp.add_row(std::move(up), g[l] / scale + t0);
    lp.add_row(std::move(down), -g[l] / scale + t0);
  }
  {
    std::vector<double> row(nv, 0.0);
    row[nq] = 1.0;
    lp.add_row(std::move(row), t0);
  }

  const LpResult res = solve_lp(lp, 200 * (degree + 2));
  Solve out;
  out.stalled = res.status == LpStatus::kIterationLimit;
  out.optimal = res.status == LpStatus::kOptimal;
  if (out.optimal) {
    out.q.resize(static_cast<std::size_t>(nq));
    for (int i = 0; i < nq; ++i) out.q[i] = res.x[i] * scale;
  }
  return out;
}

bool acceptable(const Local& d, const Poly& p) {
  if (!convexity_certificate(p, d.a, d.b).convex) return false;
  const Poly dp = p.derivative();
  const double tol = 1e-10 * std::max({std::abs(d.dfa), std::abs(d.dfb),
                                       std::abs(d.ga) / d.w, std::abs(d.gb) / d.w, 1e-300});
  return dp(d.a) - d.dfa >= -tol && d.dfb - dp(d.b) >= -tol;
}

}  // namespace

ConvexPiece convex_parabola(const ConvexOracle& f, Interval on) {
  if (!(on.a < on.b)) throw Error(ErrorCode::kInvalidArgument, "convex_parabola: requires a < b");
  if (!convexity_spot_check(f, on).passed) {
    throw Error(ErrorCode::kNotConvexInput, "convex_parabola: function fails the convexity check");
  }
  const Local d(f, on);
  return finish(f, d, d.parabola_poly(), PieceFallback::kParabola, lobatto(17));
}

ConvexPiece convex_piece(const ConvexOracle& f, Interval on, int degree) {
  if (degree < 2) throw Error(ErrorCode::kInvalidArgument, "convex_piece: degree must be >= 2");
  if (!(on.a < on.b)) throw Error(ErrorCode::kInvalidArgument, "convex_piece: requires a < b");
  const Local d(f, on);
  const std::vector<double> zeta = lobatto(8 * degree);
  const double domain_scale = std::max({1.0, std::abs(on.a), std::abs(on.b)});
  if (on.b - on.a <= 1e-13 * domain_scale) {
    return finish(f, d, d.secant_poly(), PieceFallback::kSecant, zeta);
  }

  std::vector<double> g(zeta.size());
  double scale = std::max(std::abs(d.ga), std::abs(d.gb));
  for (std::size_t l = 0; l < zeta.size(); ++l) {
    g[l] = f(d.x_of(zeta[l])) - d.secant(zeta[l]);
    scale = std::max(scale, std::abs(g[l]));
  }
  const double value_scale = std::max(std::abs(d.fa), std::abs(d.fb));
  if (scale == 0.0 || scale <= 1e-15 * value_scale) {
    return finish(f, d, d.secant_poly(), PieceFallback::kSecant, zeta);
  }

  const std::vector<double> xi = lobatto(4 * degree);
  const Poly parabola = d.parabola_poly();
  Solve first = solve_piece(d, degree, xi, zeta, g, scale, 0.0);
  if (first.stalled) return finish(f, d, parabola, PieceFallback::kStalled, zeta);
  if (first.optimal) {
    Poly p = d.from_q(first.q);
    if (acceptable(d, p)) return finish(f, d, std::move(p), PieceFallback::kNone, zeta);
  }
  Solve second = solve_piece(d, degree, xi, zeta, g, scale, 1e-8);
  if (second.optimal) {
    Poly p = d.from_q(second.q);
    if (acceptable(d, p)) return finish(f, d, std::move(p), PieceFallback::kTightened, zeta);
  }

  // Both candidate and parabola satisfy the linear constraints, so any convex
  // combination does too; move toward the parabola just far enough to make
  // the curvature nonnegative.
  const Solve& best = second.optimal ? second : first;
  if (best.optimal) {
    const Poly p = d.from_q(best.q);
    const double m = convexity_certificate(p, d.a, d.b).min_second_derivative;
    const double cpar = parabola.derivative(2)(d.c);
    if (m < 0.0 && cpar > 0.0) {
      const double theta = std::min(1.0, (-m / (cpar - m)) * (1.0 + 1e-6));
      Poly blend = p * (1.0 - theta) + parabola * theta;
      if (acceptable(d, blend)) return finish(f, d, std::move(blend), PieceFallback::kBlended, zeta);
    }
  }
  return finish(f, d, parabola, PieceFallback::kParabola, zeta);
}

std::vector<ConvexPiece> build_sigma_pieces(const ConvexOracle& f, const Partition& X, int r,
                                            int first, int last) {
  if (first < 0 || last > X.n() || first > last) {
    throw Error(ErrorCode::kInvalidArgument, "build_sigma_pieces: bad interval range");
  }
  const int degree = std::max(2, r + 1);
  std::vector<ConvexPiece> pieces;
  pieces.reserve(static_cast<std::size_t>(last - first));
  for (int j = first; j < last; ++j) pieces.push_back(convex_piece(f, {X[j], X[j + 1]}, degree));
  return pieces;
}

PiecewisePoly build_sigma(const ConvexOracle& f, const Partition& X, int r) {
  std::vector<Poly> polys;
  for (auto& piece : build_sigma_pieces(f, X, r, 0, X.n())) polys.push_back(std::move(piece.poly));
  PiecewisePoly s(X, std::move(polys), std::max(2, r + 1) + 1);
  s.set_convex_certified(verify_convexity(s).convex);
  return s;
}

}  // namespace convexlab
