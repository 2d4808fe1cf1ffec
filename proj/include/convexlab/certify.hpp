#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "convexlab/domain.hpp"
#include "convexlab/glue.hpp"
#include "convexlab/piecewise.hpp"
#include "convexlab/smoothness.hpp"

namespace convexlab {

/// The six pointwise estimates: three for Chebyshev partitions on [-1, 1]
/// (global, and two on the endpoint strips of width n^-2), three for a general
/// partition (first interval, last interval, interior intervals).
enum class BoundId { kGlobal, kStripSecond, kStripFirst, kFirstInterval, kLastInterval, kInterior };

inline constexpr std::array<BoundId, 6> kAllBounds = {
    BoundId::kGlobal,        BoundId::kStripSecond,  BoundId::kStripFirst,
    BoundId::kFirstInterval, BoundId::kLastInterval, BoundId::kInterior};

/// "2.3", "2.4", "2.5", "2.11", "2.12", "2.13".
const char* bound_id_name(BoundId id) noexcept;
std::optional<BoundId> parse_bound_id(std::string_view name);

struct BoundSample {
  double x = 0.0;
  double error = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct BoundReport {
  BoundId id = BoundId::kGlobal;
  std::vector<BoundSample> grid;
  double sup_ratio = 0.0;
  double sup_x = 0.0;
  /// Points where the bound is at the rounding level of f and S; they are
  /// not ratio-tested but must have |f - S| <= atol.
  std::vector<BoundSample> excluded_points;
  double atol = 0.0;
  bool excluded_ok = true;
};

inline constexpr int kDefaultBoundGrid = 2049;
inline constexpr int kInteriorModulusGrid = 256;

/// Caches the moduli of f^(r) over [-1, 1] so that many reports for the same
/// (f, r) share them. Immutable after construction; safe to share.
class CertificationContext {
 public:
  CertificationContext(ConvexOracle f, int r, int modulus_grid = kCertificationModulusGrid);

  const ConvexOracle& function() const noexcept { return f_; }
  int r() const noexcept { return r_; }

  /// Throws kMismatchedInputs if S is not on the Chebyshev partition T_n.
  BoundReport report(const PiecewisePoly& S, int n, BoundId id, int grid_size = kDefaultBoundGrid) const;

 private:
  ConvexOracle f_;
  int r_;
  int modulus_grid_;
  ScalarFunction top_;
  std::shared_ptr<const ModulusProfile> omega1_;
  std::shared_ptr<const ModulusProfile> omega2_;
};

BoundReport pointwise_bound_report(const ConvexOracle& f, const PiecewisePoly& S, int r, int n,
                                   BoundId id, int grid_size = kDefaultBoundGrid,
                                   int modulus_grid = kCertificationModulusGrid);

struct SweepOptions {
  int grid_size = kDefaultBoundGrid;
  int modulus_grid = kCertificationModulusGrid;
  GlueConfig glue;
  int jobs = 1;
  bool timing = false;
};

struct SweepRow {
  int n = 0;
  int n_threshold = 0;
  bool computed = false;
  std::array<double, 6> sup_ratio{};
  double wall_ms = 0.0;
};

/// One row per n; rows with n below the threshold are flagged and left empty.
/// Rows are computed by up to `jobs` workers and returned in input order.
std::vector<SweepRow> sweep(const ConvexOracle& f, int r, std::span<const int> n_list,
                            const SweepOptions& options = {});

/// n,N_threshold,sup_ratio_2_3,...,sup_ratio_2_13,wall_ms. Uncomputed values
/// and (unless `timing`) wall times are written as NA.
std::string sweep_csv(std::span<const SweepRow> rows, bool timing);

struct CounterexampleWitness {
  int r = 1;
  int m = 1;
  double x_last = 0.0;
  double epsilon = 0.0;
  double markov_lhs = 0.0;
  double markov_rhs = 0.0;
  double epsilon_threshold = 0.0;
  bool contradiction = false;
};

/// Markov-inequality chain on the last interval [x_last, 1] for s of order m.
/// Without an epsilon, half the threshold (capped at 1) is used.
CounterexampleWitness counterexample_witness(int r, int m, double x_last,
                                             std::optional<double> epsilon = std::nullopt);

struct PolynomialWitness {
  int r = 1;
  int n = 1;
  double epsilon = 0.0;
  double markov_lhs = 0.0;
  double markov_rhs = 0.0;
  double ratio = 0.0;
  bool contradiction = false;
};

/// The same chain for a single convex polynomial of degree n with epsilon = n^-2.
PolynomialWitness polynomial_witness(int r, int n);

struct ThresholdRow {
  double epsilon = 0.0;
  int n_threshold = 0;
};

struct ThresholdGrowth {
  std::vector<ThresholdRow> rows;
  bool nondecreasing = true;
};

/// N_threshold of the truncated power max(0, x - 1 + eps)^(r+1) for each eps
/// (given in descending order).
ThresholdGrowth threshold_growth(int r, std::span<const double> eps_list,
                                 const GlueConfig& config = {});

}  // namespace convexlab
