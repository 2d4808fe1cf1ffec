#include "convexlab/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "convexlab/error.hpp"

namespace convexlab {

PiecewisePoly::PiecewisePoly(Partition knots, std::vector<Poly> pieces, int order)
    : knots_(std::move(knots)), pieces_(std::move(pieces)), order_(order) {
  if (static_cast<int>(pieces_.size()) != knots_.n()) {
    throw Error(ErrorCode::kInvalidArgument, "PiecewisePoly: need one piece per interval");
  }
  if (order_ < 1) throw Error(ErrorCode::kInvalidArgument, "PiecewisePoly: order must be positive");
  for (const auto& p : pieces_) {
    if (p.degree() > order_ - 1) {
      throw Error(ErrorCode::kInvalidArgument, "PiecewisePoly: piece degree exceeds order - 1");
    }
  }
}

const Poly& PiecewisePoly::piece_at(double x) const {
  return pieces_[static_cast<std::size_t>(knots_.interval_of(x) - 1)];
}

double PiecewisePoly::operator()(double x) const { return piece_at(x)(x); }

double PiecewisePoly::derivative(int order, double x) const {
  return piece_at(x).derivative(order)(x);
}

double PiecewisePoly::one_sided_derivative(int order, int j, Side side) const {
  if (j < 0 || j > knots_.n()) throw Error(ErrorCode::kInvalidArgument, "knot index out of range");
  int piece = side == Side::kLeft ? j - 1 : j;
  piece = std::clamp(piece, 0, knots_.n() - 1);
  return pieces_[static_cast<std::size_t>(piece)].derivative(order)(knots_[j]);
}

double PiecewisePoly::max_seam_mismatch() const {
  double worst = 0.0;
  for (int j = 1; j < knots_.n(); ++j) {
    const double x = knots_[j];
    worst = std::max(worst, std::abs(pieces_[j - 1](x) - pieces_[j](x)));
  }
  return worst;
}

double PiecewisePoly::knot_scale() const {
  double scale = 0.0;
  for (int j = 0; j <= knots_.n(); ++j) {
    scale = std::max(scale, std::abs(one_sided_derivative(0, j, Side::kRight)));
  }
  return scale;
}

ConvexityReport verify_convexity(const PiecewisePoly& s) {
  ConvexityReport report;
  const auto& x = s.knots().knots();
  for (int i = 0; i < s.knots().n(); ++i) {
    report.pieces.push_back(convexity_certificate(s.pieces()[i], x[i], x[i + 1]));
    if (!report.pieces.back().convex) {
      report.convex = false;
      report.offending_pieces.push_back(i);
    }
  }
  double slope_scale = 0.0;
  for (int j = 1; j < s.knots().n(); ++j) {
    KnotSlopeCheck k;
    k.knot = j;
    k.left_slope = s.one_sided_derivative(1, j, Side::kLeft);
    k.right_slope = s.one_sided_derivative(1, j, Side::kRight);
    slope_scale = std::max({slope_scale, std::abs(k.left_slope), std::abs(k.right_slope)});
    report.knots.push_back(k);
  }
  report.slope_tolerance = 1e-9 * slope_scale;
  for (auto& k : report.knots) {
    k.ok = k.left_slope <= k.right_slope + report.slope_tolerance;
    if (!k.ok) {
      report.convex = false;
      report.offending_knots.push_back(k.knot);
    }
  }
  return report;
}

}  // namespace convexlab
