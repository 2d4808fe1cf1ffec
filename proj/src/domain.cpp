#include "convexlab/domain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "convexlab/error.hpp"
#include "convexlab/poly.hpp"

namespace convexlab {

Partition::Partition(std::vector<double> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 3) {
    throw Error(ErrorCode::kInvalidN, "partition needs at least three knots (n >= 2)");
  }
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i])) {
      throw Error(ErrorCode::kInvalidArgument, "partition knots must be finite");
    }
    if (i > 0 && !(knots_[i] > knots_[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "partition knots must be strictly increasing");
    }
  }
}

double Partition::knot(int j) const noexcept {
  if (j <= 0) return knots_.front();
  if (j >= n()) return knots_.back();
  return knots_[static_cast<std::size_t>(j)];
}

int Partition::interval_of(double x) const noexcept {
  const auto it = std::upper_bound(knots_.begin() + 1, knots_.end() - 1, x);
  return static_cast<int>(it - knots_.begin());
}

Partition chebyshev_partition(int n) {
  if (n < 2) throw Error(ErrorCode::kInvalidN, "Chebyshev partition needs n >= 2");
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  // -cos(j pi / n) written as sin((2j - n) pi / (2n)): exactly odd about the
  // middle index and exactly +-1 at the ends.
  for (int j = 0; j <= n; ++j) {
    t[static_cast<std::size_t>(j)] = std::sin((2.0 * j - n) * std::numbers::pi / (2.0 * n));
  }
  t.front() = -1.0;
  t.back() = 1.0;
  return Partition(std::move(t));
}

Partition chebyshev_partition(int n, Interval on) {
  Partition unit = chebyshev_partition(n);
  if (on.a == -1.0 && on.b == 1.0) return unit;
  std::vector<double> x = unit.knots();
  for (double& v : x) v = on.a + 0.5 * (v + 1.0) * on.length();
  x.front() = on.a;
  x.back() = on.b;
  return Partition(std::move(x));
}

Partition uniform_partition(int n, Interval on) {
  if (n < 2) throw Error(ErrorCode::kInvalidN, "uniform partition needs n >= 2");
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) x[static_cast<std::size_t>(j)] = on.a + on.length() * j / n;
  x.back() = on.b;
  return Partition(std::move(x));
}

Partition read_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open partition file: " + path);
  std::vector<double> knots;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
      throw Error(ErrorCode::kParse,
                  "partition file " + path + ": bad number on line " + std::to_string(line_no));
    }
    knots.push_back(v);
  }
  return Partition(std::move(knots));
}

double phi(double x) noexcept { return std::sqrt(std::max(0.0, 1.0 - x * x)); }

double rho(int n, double x) {
  if (n < 1) throw Error(ErrorCode::kInvalidN, "rho: n must be positive");
  return phi(x) / n + 1.0 / (static_cast<double>(n) * n);
}

ConvexOracle::ConvexOracle(std::string family, int smoothness, Interval domain, Evaluator eval,
                           std::vector<double> breakpoints)
    : family_(std::move(family)),
      smoothness_(smoothness),
      domain_(domain),
      eval_(std::move(eval)),
      breakpoints_(std::move(breakpoints)) {
  if (!(domain_.a < domain_.b)) {
    throw Error(ErrorCode::kInvalidArgument, "oracle domain must satisfy a < b");
  }
  if (smoothness_ < 0) throw Error(ErrorCode::kInvalidArgument, "oracle smoothness must be >= 0");
}

double ConvexOracle::derivative(int order, double x) const {
  if (order < 0 || order > smoothness_) {
    throw Error(ErrorCode::kInvalidOrder, "oracle " + family_ + " has no derivative of order " +
                                              std::to_string(order));
  }
  return eval_(order, x);
}

ScalarFunction ConvexOracle::derivative_function(int order) const {
  if (order < 0 || order > smoothness_) {
    throw Error(ErrorCode::kInvalidOrder, "oracle " + family_ + " has no derivative of order " +
                                              std::to_string(order));
  }
  return [eval = eval_, order](double x) { return eval(order, x); };
}

ConvexOracle ConvexOracle::reflected(double pivot) const {
  std::vector<double> bps;
  for (double bp : breakpoints_) bps.push_back(2.0 * pivot - bp);
  std::sort(bps.begin(), bps.end());
  return ConvexOracle(family_ + "|reflected", smoothness_,
                      {2.0 * pivot - domain_.b, 2.0 * pivot - domain_.a},
                      [eval = eval_, pivot](int order, double x) {
                        const double v = eval(order, 2.0 * pivot - x);
                        return (order % 2) ? -v : v;
                      },
                      std::move(bps));
}

ConvexOracle ConvexOracle::minus_line(double slope, double intercept) const {
  return ConvexOracle(family_, smoothness_, domain_,
                      [eval = eval_, slope, intercept](int order, double x) {
                        const double v = eval(order, x);
                        if (order == 0) return v - (intercept + slope * x);
                        if (order == 1) return v - slope;
                        return v;
                      },
                      breakpoints_);
}

namespace oracles {

namespace {

double falling(double p, int order) {
  double v = 1.0;
  for (int i = 0; i < order; ++i) v *= p - i;
  return v;
}

std::string format_param(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

ConvexOracle exponential(double alpha) {
  return ConvexOracle("exp:alpha=" + format_param(alpha), ConvexOracle::kSmoothAll, {},
                      [alpha](int order, double x) {
                        return std::pow(alpha, order) * std::exp(alpha * x);
                      });
}

ConvexOracle hyperbolic_cosine(double beta) {
  return ConvexOracle("cosh:beta=" + format_param(beta), ConvexOracle::kSmoothAll, {},
                      [beta](int order, double x) {
                        const double scale = std::pow(beta, order);
                        return scale * ((order % 2) ? std::sinh(beta * x) : std::cosh(beta * x));
                      });
}

ConvexOracle even_power(int m) {
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "pow: m must be >= 1");
  const int degree = 2 * m;
  return ConvexOracle("pow:m=" + std::to_string(m), ConvexOracle::kSmoothAll, {},
                      [degree](int order, double x) {
                        if (order > degree) return 0.0;
                        return falling(degree, order) * std::pow(x, degree - order);
                      });
}

ConvexOracle polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::kInvalidArgument, "poly: no coefficients");
  const Poly p = Poly::from_monomials(coeffs);
  if (p.degree() >= 2 && !convexity_certificate(p, -1.0, 1.0).convex) {
    throw Error(ErrorCode::kNotConvexInput, "poly: polynomial is not convex on [-1, 1]");
  }
  std::vector<Poly> derivatives{p};
  for (int i = 1; i <= p.degree() + 1; ++i) derivatives.push_back(derivatives.back().derivative());
  std::string name = "poly:coeffs=";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) name += ",";
    name += format_param(coeffs[i]);
  }
  return ConvexOracle(std::move(name), ConvexOracle::kSmoothAll, {},
                      [derivatives](int order, double x) {
                        if (static_cast<std::size_t>(order) >= derivatives.size()) return 0.0;
                        return derivatives[static_cast<std::size_t>(order)](x);
                      });
}

ConvexOracle sqrt_singular(int r) {
  if (r < 0) throw Error(ErrorCode::kInvalidArgument, "f0: r must be >= 0");
  const double p = r + 0.5;
  return ConvexOracle("f0:r=" + std::to_string(r), r, {},
                      [p](int order, double x) {
                        return falling(p, order) * std::pow(std::max(0.0, 1.0 + x), p - order);
                      },
                      {-1.0});
}

ConvexOracle truncated_power(int r, double eps) {
  if (r < 0) throw Error(ErrorCode::kInvalidArgument, "truncpow: r must be >= 0");
  if (!(eps > 0.0 && eps <= 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "truncpow: eps must lie in (0, 2]");
  }
  const int power = r + 1;
  const double kink = 1.0 - eps;
  return ConvexOracle("truncpow:r=" + std::to_string(r) + ",eps=" + format_param(eps), r, {},
                      [power, kink](int order, double x) {
                        const double d = x - kink;
                        if (d <= 0.0) return 0.0;
                        return falling(power, order) * std::pow(d, power - order);
                      },
                      {kink});
}

}  // namespace oracles

namespace {

double parse_real(std::string_view text, std::string_view spec) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kParse, "bad number '" + std::string(text) + "' in function spec '" +
                                       std::string(spec) + "'");
  }
  return v;
}

int parse_int(std::string_view text, std::string_view spec) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParse, "bad integer '" + std::string(text) + "' in function spec '" +
                                       std::string(spec) + "'");
  }
  return v;
}

}  // namespace

ConvexOracle parse_oracle(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view family = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? "" : spec.substr(colon + 1);

  // key=value pairs; a bare value continues the list of the previous key
  // (poly:coeffs=0,0,1).
  std::map<std::string, std::vector<std::string>, std::less<>> params;
  std::string current;
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    if (comma == std::string_view::npos) comma = rest.size();
    const std::string_view item = rest.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq != std::string_view::npos) {
      current = std::string(item.substr(0, eq));
      if (params.count(current)) {
        throw Error(ErrorCode::kParse, "duplicate key '" + current + "' in '" + std::string(spec) + "'");
      }
      params[current].emplace_back(item.substr(eq + 1));
    } else if (!current.empty()) {
      params[current].emplace_back(item);
    } else {
      throw Error(ErrorCode::kParse, "expected key=value in '" + std::string(spec) + "'");
    }
    pos = comma + 1;
  }

  auto take = [&](std::string_view key) -> std::string {
    const auto it = params.find(key);
    if (it == params.end()) {
      throw Error(ErrorCode::kParse, "missing key '" + std::string(key) + "' in '" + std::string(spec) + "'");
    }
    if (it->second.size() != 1) {
      throw Error(ErrorCode::kParse, "key '" + std::string(key) + "' takes one value");
    }
    std::string v = it->second.front();
    params.erase(it);
    return v;
  };
  auto finish = [&](ConvexOracle oracle) {
    if (!params.empty()) {
      throw Error(ErrorCode::kParse, "unknown key '" + params.begin()->first + "' for family '" +
                                         std::string(family) + "'");
    }
    return oracle;
  };

  if (family == "exp") return finish(oracles::exponential(parse_real(take("alpha"), spec)));
  if (family == "cosh") return finish(oracles::hyperbolic_cosine(parse_real(take("beta"), spec)));
  if (family == "pow") return finish(oracles::even_power(parse_int(take("m"), spec)));
  if (family == "f0") return finish(oracles::sqrt_singular(parse_int(take("r"), spec)));
  if (family == "truncpow") {
    const int r = parse_int(take("r"), spec);
    const double eps = parse_real(take("eps"), spec);
    return finish(oracles::truncated_power(r, eps));
  }
  if (family == "poly") {
    const auto it = params.find("coeffs");
    if (it == params.end()) throw Error(ErrorCode::kParse, "poly needs coeffs=...");
    std::vector<double> coeffs;
    for (const auto& c : it->second) coeffs.push_back(parse_real(c, spec));
    params.erase(it);
    return finish(oracles::polynomial(std::move(coeffs)));
  }
  throw Error(ErrorCode::kParse, "unknown function family '" + std::string(family) + "'");
}

ConvexitySpotCheck convexity_spot_check(const ConvexOracle& f, Interval on, int samples) {
  ConvexitySpotCheck check;
  check.min_curvature = std::numeric_limits<double>::infinity();
  samples = std::max(samples, 3);
  const double h = on.length() / (samples - 1);
  auto x_at = [&](int i) { return i == samples - 1 ? on.b : on.a + h * i; };
  if (f.smoothness() >= 2) {
    for (int i = 0; i < samples; ++i) {
      const double c = f.derivative(2, x_at(i));
      check.min_curvature = std::min(check.min_curvature, c);
      check.max_abs_curvature = std::max(check.max_abs_curvature, std::abs(c));
    }
  } else {
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    for (int i = 1; i + 1 < samples; ++i) {
      const double fl = f(x_at(i - 1));
      const double fc = f(x_at(i));
      const double fr = f(x_at(i + 1));
      const double allowance = 8.0 * kEps * (std::abs(fl) + 2.0 * std::abs(fc) + std::abs(fr));
      const double q = (fl - 2.0 * fc + fr + allowance) / (h * h);
      check.min_curvature = std::min(check.min_curvature, q);
      check.max_abs_curvature = std::max(check.max_abs_curvature, std::abs(q));
    }
  }
  check.passed = check.min_curvature >= -1e-12 * (1.0 + check.max_abs_curvature);
  return check;
}

double AffineMap::derivative_to_original(int order, double u, double g_derivative) const {
  if (order == 0) return value_to_original(u, g_derivative);
  const double factor = std::pow(scale, order);
  if (order == 1) return (g_derivative + slope) / factor;
  return g_derivative / factor;
}

Normalized normalize_to_unit(const ConvexOracle& f, Interval on) {
  if (!(on.a < on.b)) throw Error(ErrorCode::kInvalidArgument, "normalize_to_unit: requires a < b");
  const double fa = f(on.a);
  const double fb = f(on.b);
  AffineMap map{on.length(), on.a, fb - fa, fa};
  std::vector<double> bps;
  for (double bp : f.breakpoints()) {
    const double u = map.to_unit(bp);
    if (u >= 0.0 && u <= 1.0) bps.push_back(u);
  }
  auto eval = [f, on, fa, fb](int order, double u) {
    const double x = u >= 1.0 ? on.b : (u <= 0.0 ? on.a : on.a + u * on.length());
    const double v = f.derivative(order, x);
    if (order == 0) return v - ((1.0 - u) * fa + u * fb);
    const double scaled = std::pow(on.length(), order) * v;
    return order == 1 ? scaled - (fb - fa) : scaled;
  };
  ConvexOracle g(f.family() + "|normalized", f.smoothness(), {0.0, 1.0}, std::move(eval),
                 std::move(bps));
  return {std::move(g), map};
}

Line tangent_line(const ConvexOracle& f, double x0) {
  const double slope = f.derivative(1, x0);
  return {slope, f(x0) - slope * x0};
}

}  // namespace convexlab
