#include "convexlab/smoothness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "convexlab/error.hpp"

namespace convexlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double binomial(int k, int i) {
  double v = 1.0;
  for (int j = 1; j <= i; ++j) v = v * (k - i + j) / j;
  return v;
}

void check_order(int k) {
  if (k < 1 || k > kMaxDifferenceOrder) {
    throw Error(ErrorCode::kInvalidOrder, "difference order must lie in [1, 8]");
  }
}

struct Stencil {
  int k;
  std::array<double, kMaxDifferenceOrder + 1> weights{};

  explicit Stencil(int order) : k(order) {
    for (int i = 0; i <= k; ++i) weights[i] = ((i % 2) ? -1.0 : 1.0) * binomial(k, i);
  }

  double slack(double a, double b) const { return 8.0 * kEps * (std::abs(a) + std::abs(b)); }

  bool admissible(double u, double x, double a, double b) const {
    const double half = 0.5 * k * u;
    const double tol = slack(a, b);
    return x - half >= a - tol && x + half <= b + tol;
  }

  double apply(const ScalarFunction& f, double u, double x, double a, double b) const {
    if (!admissible(u, x, a, b)) return 0.0;
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) {
      const double xi = std::clamp(x + (0.5 * k - i) * u, a, b);
      acc += weights[i] * f(xi);
    }
    return acc;
  }
};

// Centers that put a stencil node on (or half a step beside) a breakpoint.
template <typename Visit>
void breakpoint_centers(std::span<const double> breakpoints, int k, double u, double lo, double hi,
                        Visit&& visit) {
  for (double bp : breakpoints) {
    for (int j = -k - 1; j <= k + 1; ++j) {
      const double x = bp + 0.5 * j * u;
      if (x >= lo && x <= hi) visit(x);
    }
  }
}

template <typename Objective>
double golden_max(Objective&& g, double lo, double hi, double& arg) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double g1 = g(x1);
  double g2 = g(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + kInvPhi * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - kInvPhi * (hi - lo);
      g1 = g(x1);
    }
  }
  if (g1 >= g2) {
    arg = x1;
    return g1;
  }
  arg = x2;
  return g2;
}

}  // namespace

double finite_difference(const ScalarFunction& f, int k, double u, double x, double a, double b) {
  check_order(k);
  return Stencil(k).apply(f, u, x, a, b);
}

ModulusResult modulus(const ScalarFunction& f, int k, double t, double a, double b, int grid,
                      std::span<const double> breakpoints) {
  check_order(k);
  if (grid < 2) throw Error(ErrorCode::kInvalidArgument, "modulus: grid must be at least 2");
  if (!(a < b)) throw Error(ErrorCode::kInvalidArgument, "modulus: requires a < b");
  ModulusResult best;
  best.grid_density = grid;
  best.arg_x = 0.5 * (a + b);
  const double t_eff = std::min(t, (b - a) / k);
  if (!(t_eff > 0.0)) return best;

  const Stencil stencil(k);
  auto consider = [&](double u, double x) {
    const double v = std::abs(stencil.apply(f, u, x, a, b));
    if (v > best.value) {
      best.value = v;
      best.arg_u = u;
      best.arg_x = x;
    }
  };

  for (int i = 1; i <= grid; ++i) {
    const double u = t_eff * static_cast<double>(i) / grid;
    const double lo = std::min(a + 0.5 * k * u, 0.5 * (a + b));
    const double hi = std::max(b - 0.5 * k * u, 0.5 * (a + b));
    for (int j = 0; j < grid; ++j) {
      const double x = j == grid - 1 ? hi : lo + (hi - lo) * static_cast<double>(j) / (grid - 1);
      consider(u, x);
    }
    breakpoint_centers(breakpoints, k, u, lo, hi, [&](double x) { consider(u, x); });
  }
  if (best.value == 0.0) return best;

  // Refine in x at the best step, then in u at the refined center.
  {
    const double u = best.arg_u;
    const double lo = std::min(a + 0.5 * k * u, 0.5 * (a + b));
    const double hi = std::max(b - 0.5 * k * u, 0.5 * (a + b));
    const double dx = (hi - lo) / std::max(grid - 1, 1);
    double arg = best.arg_x;
    const double v = golden_max([&](double x) { return std::abs(stencil.apply(f, u, x, a, b)); },
                                std::max(lo, best.arg_x - dx), std::min(hi, best.arg_x + dx), arg);
    if (v > best.value) {
      best.value = v;
      best.arg_x = arg;
    }
  }
  {
    const double x = best.arg_x;
    const double du = t_eff / grid;
    double arg = best.arg_u;
    const double v = golden_max([&](double u) { return std::abs(stencil.apply(f, u, x, a, b)); },
                                std::max(0.0, best.arg_u - du), std::min(t_eff, best.arg_u + du), arg);
    if (v > best.value) {
      best.value = v;
      best.arg_u = arg;
    }
  }
  return best;
}

double one_sided_modulus(const ScalarFunction& f, int k, double x, double a, double b, Side side,
                         int grid, std::span<const double> breakpoints) {
  check_order(k);
  const double d = side == Side::kLeft ? x - a : b - x;
  if (d <= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= k; ++m) {
    const double step = std::pow(d, 1.0 / m) * std::pow(b - a, (m - 1.0) / m);
    best = std::min(best, modulus(f, m, step, a, b, grid, breakpoints).value);
  }
  return best;
}

ModulusProfile::ModulusProfile(ScalarFunction f, int k, double a, double b, int grid,
                               std::vector<double> breakpoints)
    : f_(std::move(f)), k_(k), a_(a), b_(b), grid_(grid), breakpoints_(std::move(breakpoints)) {
  check_order(k);
  if (!(a < b)) throw Error(ErrorCode::kInvalidArgument, "ModulusProfile: requires a < b");
  if (grid < 2) throw Error(ErrorCode::kInvalidArgument, "ModulusProfile: grid must be at least 2");
  constexpr int kLadder = 256;
  constexpr double kSpan = 1e-12;
  const double u_max = (b - a) / k;
  ladder_.resize(kLadder);
  running_max_.resize(kLadder);
  for (int i = 0; i < kLadder; ++i) {
    ladder_[i] = u_max * std::pow(kSpan, 1.0 - static_cast<double>(i) / (kLadder - 1));
  }
  ladder_.back() = u_max;
  double run = 0.0;
  for (int i = 0; i < kLadder; ++i) {
    run = std::max(run, max_over_x(ladder_[i]));
    running_max_[i] = run;
  }
}

double ModulusProfile::max_over_x(double u) const {
  const Stencil stencil(k_);
  const double lo = std::min(a_ + 0.5 * k_ * u, 0.5 * (a_ + b_));
  const double hi = std::max(b_ - 0.5 * k_ * u, 0.5 * (a_ + b_));
  double best = 0.0;
  for (int j = 0; j < grid_; ++j) {
    const double x = j == grid_ - 1 ? hi : lo + (hi - lo) * static_cast<double>(j) / (grid_ - 1);
    best = std::max(best, std::abs(stencil.apply(f_, u, x, a_, b_)));
  }
  breakpoint_centers(breakpoints_, k_, u, lo, hi, [&](double x) {
    best = std::max(best, std::abs(stencil.apply(f_, u, x, a_, b_)));
  });
  return best;
}

double ModulusProfile::operator()(double t) const {
  const double t_eff = std::min(t, (b_ - a_) / k_);
  if (!(t_eff > 0.0)) return 0.0;
  double value = max_over_x(t_eff);
  const auto it = std::upper_bound(ladder_.begin(), ladder_.end(), t_eff);
  if (it != ladder_.begin()) {
    value = std::max(value, running_max_[static_cast<std::size_t>(it - ladder_.begin()) - 1]);
  }
  return value;
}

double one_sided_from_profiles(std::span<const ModulusProfile> profiles, double x, Side side) {
  if (profiles.empty()) throw Error(ErrorCode::kInvalidArgument, "one_sided_from_profiles: empty");
  const double a = profiles.front().a();
  const double b = profiles.front().b();
  const double d = side == Side::kLeft ? x - a : b - x;
  if (d <= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& profile : profiles) {
    const int m = profile.order();
    const double step = std::pow(d, 1.0 / m) * std::pow(b - a, (m - 1.0) / m);
    best = std::min(best, profile(step));
  }
  return best;
}

}  // namespace convexlab
