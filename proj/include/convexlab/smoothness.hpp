#pragma once

#include <functional>
#include <span>
#include <vector>

namespace convexlab {

using ScalarFunction = std::function<double(double)>;

inline constexpr int kDefaultModulusGrid = 512;
inline constexpr int kCertificationModulusGrid = 2048;
inline constexpr int kMaxDifferenceOrder = 8;

enum class Side { kLeft, kRight };

struct ModulusResult {
  double value = 0.0;
  double arg_u = 0.0;
  double arg_x = 0.0;
  int grid_density = 0;
};

/// Symmetric k-th difference sum_i (-1)^i C(k,i) f(x + (k/2 - i) u); zero when
/// x +- (k/2) u leaves [a, b]. Sample points are clamped into [a, b] so that a
/// rounding excursion of one ulp never reaches outside the domain of f.
double finite_difference(const ScalarFunction& f, int k, double u, double x, double a, double b);

/// Lower bound on omega_k(f, t; [a, b]) from a grid x grid lattice over
/// (u, x) plus one golden-section refinement around the discrete argmax.
///
/// `breakpoints` are abscissae where f loses smoothness (kinks, singular
/// endpoints). Each lattice row is augmented with centers that line the
/// difference stencil up with them; without this a kink narrower than the
/// lattice spacing is invisible to the search.
ModulusResult modulus(const ScalarFunction& f, int k, double t, double a, double b,
                      int grid = kDefaultModulusGrid, std::span<const double> breakpoints = {});

/// omega-bar (side = left) or omega-tilde (side = right):
/// min over 1 <= m <= k of omega_m(f, d^(1/m) (b-a)^((m-1)/m); [a, b]), where d is
/// x - a or b - x.
double one_sided_modulus(const ScalarFunction& f, int k, double x, double a, double b, Side side,
                         int grid = kDefaultModulusGrid, std::span<const double> breakpoints = {});

/// Cached t -> omega_k(f, t; [a, b]) for repeated queries at many t.
///
/// Tabulates M(u) = max_x |Delta^k_u f(x)| on a geometric ladder of steps and
/// answers a query by the running maximum of the ladder below t together with
/// a direct evaluation of M(t). Every reported value is attained by an actual
/// difference, so queries remain lower bounds of the true modulus.
class ModulusProfile {
 public:
  ModulusProfile(ScalarFunction f, int k, double a, double b, int grid = kCertificationModulusGrid,
                 std::vector<double> breakpoints = {});

  double operator()(double t) const;
  int order() const noexcept { return k_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

 private:
  double max_over_x(double u) const;

  ScalarFunction f_;
  int k_;
  double a_;
  double b_;
  int grid_;
  std::vector<double> breakpoints_;
  std::vector<double> ladder_;
  std::vector<double> running_max_;
};

/// One-sided composite modulus assembled from profiles for orders 1..k on the
/// same interval (profiles[m-1] has order m).
double one_sided_from_profiles(std::span<const ModulusProfile> profiles, double x, Side side);

}  // namespace convexlab
