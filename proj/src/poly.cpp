#include "convexlab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "convexlab/error.hpp"

namespace convexlab {

namespace {

// Coefficients of sum_i c_i (beta + alpha v)^i as a polynomial in v.
std::vector<double> compose_affine(const std::vector<double>& c, double beta, double alpha) {
  std::vector<double> out{c.back()};
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    std::vector<double> next(out.size() + 1, 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      next[i] += beta * out[i];
      next[i + 1] += alpha * out[i];
    }
    next[0] += c[k];
    out = std::move(next);
  }
  return out;
}

double horner(const std::vector<double>& c, double u) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * u + c[i];
  return acc;
}

void trim(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

}  // namespace

Poly::Poly(double center, double halfwidth, std::vector<double> coeffs)
    : center_(center), halfwidth_(halfwidth), coeffs_(std::move(coeffs)) {
  if (!(halfwidth_ > 0.0) || !std::isfinite(halfwidth_)) {
    throw Error(ErrorCode::kInvalidArgument, "Poly: halfwidth must be positive and finite");
  }
  if (coeffs_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "Poly: coefficient list is empty");
  }
}

Poly Poly::constant(double value, double center, double halfwidth) {
  return Poly(center, halfwidth, {value});
}

Poly Poly::line(double slope, double intercept, double center, double halfwidth) {
  return Poly(center, halfwidth, {intercept + slope * center, slope * halfwidth});
}

Poly Poly::from_monomials(std::span<const double> coeffs, double center, double halfwidth) {
  if (coeffs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "Poly: coefficient list is empty");
  }
  std::vector<double> c(coeffs.begin(), coeffs.end());
  return Poly(center, halfwidth, compose_affine(c, center, halfwidth));
}

double Poly::operator()(double x) const noexcept { return horner(coeffs_, local(x)); }

double Poly::abs_eval(double x) const noexcept {
  const double u = std::abs(local(x));
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * u + std::abs(coeffs_[i]);
  return acc;
}

Poly Poly::derivative() const {
  if (coeffs_.size() == 1) return Poly(center_, halfwidth_, {0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    d[i - 1] = static_cast<double>(i) * coeffs_[i] / halfwidth_;
  }
  return Poly(center_, halfwidth_, std::move(d));
}

Poly Poly::derivative(int order) const {
  Poly p = *this;
  for (int i = 0; i < order; ++i) p = p.derivative();
  return p;
}

Poly Poly::antiderivative(double x0, double y0) const {
  std::vector<double> q(coeffs_.size() + 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    q[i + 1] = coeffs_[i] * halfwidth_ / static_cast<double>(i + 1);
  }
  Poly out(center_, halfwidth_, std::move(q));
  out.coeffs_[0] = y0 - out(x0);
  return out;
}

Poly Poly::rebased(double center, double halfwidth) const {
  if (center == center_ && halfwidth == halfwidth_) return *this;
  const double beta = (center - center_) / halfwidth_;
  const double alpha = halfwidth / halfwidth_;
  return Poly(center, halfwidth, compose_affine(coeffs_, beta, alpha));
}

Poly Poly::reflected(double pivot) const {
  std::vector<double> c = coeffs_;
  for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
  return Poly(2.0 * pivot - center_, halfwidth_, std::move(c));
}

std::vector<double> Poly::monomials() const { return rebased(0.0, 1.0).coeffs(); }

Poly Poly::operator+(const Poly& other) const {
  const Poly o = other.rebased(center_, halfwidth_);
  std::vector<double> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
  return Poly(center_, halfwidth_, std::move(c));
}

Poly Poly::operator-(const Poly& other) const { return *this + other * -1.0; }

Poly Poly::operator*(double s) const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v *= s;
  return Poly(center_, halfwidth_, std::move(c));
}

Poly Poly::operator+(double s) const {
  std::vector<double> c = coeffs_;
  c[0] += s;
  return Poly(center_, halfwidth_, std::move(c));
}

Poly hermite_interpolant(std::span<const HermiteNode> nodes) {
  std::size_t m = 0;
  for (const auto& node : nodes) m += node.derivatives.size();
  if (m == 0) {
    throw Error(ErrorCode::kInvalidArgument, "hermite_interpolant: no interpolation conditions");
  }

  std::vector<HermiteNode> sorted;
  for (const auto& node : nodes) {
    if (!node.derivatives.empty()) sorted.push_back(node);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const HermiteNode& l, const HermiteNode& r) { return l.x < r.x; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].x == sorted[i - 1].x) {
      throw Error(ErrorCode::kDegenerateNodes, "hermite_interpolant: coincident abscissae");
    }
  }

  const double lo = sorted.front().x;
  const double hi = sorted.back().x;
  const double center = sorted.size() == 1 ? lo : 0.5 * (lo + hi);
  const double halfwidth = sorted.size() == 1 ? 1.0 : 0.5 * (hi - lo);

  // Expanded abscissae z (local coordinates) and, per entry, its node index.
  std::vector<double> z;
  std::vector<std::size_t> owner;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double u = (sorted[k].x - center) / halfwidth;
    for (std::size_t j = 0; j < sorted[k].derivatives.size(); ++j) {
      z.push_back(u);
      owner.push_back(k);
    }
  }

  // Derivatives rescaled to the local variable and divided by j!.
  std::vector<std::vector<double>> scaled(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    double factor = 1.0;
    double factorial = 1.0;
    for (std::size_t j = 0; j < sorted[k].derivatives.size(); ++j) {
      if (j > 0) {
        factor *= halfwidth;
        factorial *= static_cast<double>(j);
      }
      scaled[k].push_back(sorted[k].derivatives[j] * factor / factorial);
    }
  }

  // column[i] holds f[z_i, ..., z_{i+level}] as the table advances.
  std::vector<double> column(m);
  for (std::size_t i = 0; i < m; ++i) column[i] = scaled[owner[i]][0];
  std::vector<double> newton{column[0]};
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      if (owner[i] == owner[i + level]) {
        column[i] = scaled[owner[i]][level];
      } else {
        column[i] = (column[i + 1] - column[i]) / (z[i + level] - z[i]);
      }
      if (!std::isfinite(column[i])) {
        throw Error(ErrorCode::kIllConditioned, "hermite_interpolant: non-finite divided difference");
      }
    }
    newton.push_back(column[0]);
  }

  std::vector<double> c{newton[m - 1]};
  for (std::size_t j = m - 1; j-- > 0;) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] -= z[j] * c[i];
      next[i + 1] += c[i];
    }
    next[0] += newton[j];
    c = std::move(next);
  }
  for (double v : c) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kIllConditioned, "hermite_interpolant: non-finite coefficient");
    }
  }
  return Poly(center, halfwidth, std::move(c));
}

namespace {

bool bound_excludes_root(const std::vector<double>& c) {
  double tail = 0.0;
  for (std::size_t i = 1; i < c.size(); ++i) tail += std::abs(c[i]);
  return std::abs(c[0]) > tail;
}

double bisect_root(const Poly& p, double lo, double hi) {
  double flo = p(lo);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void isolate(const Poly& p, const Poly& dp, double lo, double hi, int depth,
             std::vector<double>& roots) {
  const double c = 0.5 * (lo + hi);
  const double w = 0.5 * (hi - lo);
  if (!(w > 0.0)) return;
  if (bound_excludes_root(p.rebased(c, w).coeffs())) return;
  if (bound_excludes_root(dp.rebased(c, w).coeffs())) {
    // Strictly monotone here: at most one root.
    const double flo = p(lo);
    const double fhi = p(hi);
    if (flo == 0.0) {
      roots.push_back(lo);
    } else if (fhi == 0.0) {
      roots.push_back(hi);
    } else if ((flo < 0.0) != (fhi < 0.0)) {
      roots.push_back(bisect_root(p, lo, hi));
    }
    return;
  }
  if (depth >= 60) {
    roots.push_back(c);
    return;
  }
  isolate(p, dp, lo, c, depth + 1, roots);
  isolate(p, dp, c, hi, depth + 1, roots);
}

}  // namespace

std::vector<double> real_roots(const Poly& p, double a, double b) {
  std::vector<double> roots;
  if (!(a <= b)) return roots;
  if (a == b) {
    if (p(a) == 0.0) roots.push_back(a);
    return roots;
  }
  const double c = 0.5 * (a + b);
  const double w = 0.5 * (b - a);
  Poly local = p.rebased(c, w);
  std::vector<double> k = local.coeffs();
  double scale = 0.0;
  for (double v : k) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return roots;
  // Leading coefficients at rounding level relative to the rest are noise.
  while (k.size() > 1 && std::abs(k.back()) <= 1e-14 * scale) k.pop_back();
  trim(k);

  auto push_local = [&](double v) {
    if (v >= -1.0 && v <= 1.0) roots.push_back(std::clamp(c + w * v, a, b));
  };

  if (k.size() == 2) {
    push_local(-k[0] / k[1]);
  } else if (k.size() == 3) {
    const double disc = k[1] * k[1] - 4.0 * k[2] * k[0];
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double q = -0.5 * (k[1] + std::copysign(sq, k[1]));
      if (q != 0.0) {
        push_local(q / k[2]);
        push_local(k[0] / q);
      } else {
        push_local(0.0);
      }
    }
  } else if (k.size() > 3) {
    Poly trimmed(c, w, k);
    Poly d = trimmed.derivative();
    std::vector<double> local_roots;
    // Isolate in global coordinates of the trimmed polynomial on [a, b].
    isolate(trimmed, d, a, b, 0, local_roots);
    roots = std::move(local_roots);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

ConvexityCertificate convexity_certificate(const Poly& p, double a, double b) {
  if (!(a < b)) {
    throw Error(ErrorCode::kInvalidArgument, "convexity_certificate: requires a < b");
  }
  const Poly second = p.derivative(2);
  std::vector<double> candidates{a, b};
  for (double x : real_roots(second.derivative(), a, b)) candidates.push_back(x);

  ConvexityCertificate cert;
  cert.min_second_derivative = std::numeric_limits<double>::infinity();
  for (double x : candidates) {
    const double v = second(x);
    cert.max_abs_second_derivative = std::max(cert.max_abs_second_derivative, std::abs(v));
    if (v < cert.min_second_derivative) {
      cert.min_second_derivative = v;
      cert.witness_x = x;
    }
  }
  cert.tolerance = kConvexityRelTol * (1.0 + cert.max_abs_second_derivative);
  cert.convex = cert.min_second_derivative >= -cert.tolerance;
  return cert;
}

}  // namespace convexlab
