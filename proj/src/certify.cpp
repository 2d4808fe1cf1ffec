#include "convexlab/certify.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "convexlab/error.hpp"

namespace convexlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

constexpr std::array<const char*, 6> kBoundNames = {"2.3", "2.4", "2.5", "2.11", "2.12", "2.13"};

std::size_t index_of(BoundId id) { return static_cast<std::size_t>(id); }

// Points clustered toward both ends of [lo, hi], ends included.
void chebyshev_grid(double lo, double hi, int count, std::vector<double>& out) {
  if (count <= 1) {
    out.push_back(0.5 * (lo + hi));
    return;
  }
  for (int i = 0; i < count; ++i) {
    const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * i / (count - 1)));
    out.push_back(i == count - 1 ? hi : lo + (hi - lo) * t);
  }
}

double ipow(double v, int r) {
  double p = 1.0;
  for (int i = 0; i < r; ++i) p *= v;
  return p;
}

std::vector<double> breakpoints_in(const ConvexOracle& f, double a, double b) {
  std::vector<double> out;
  for (double bp : f.breakpoints()) {
    if (bp >= a && bp <= b) out.push_back(bp);
  }
  return out;
}

void check_partition(const PiecewisePoly& S, int n) {
  if (n < 2 || S.knots().n() != n) {
    throw Error(ErrorCode::kMismatchedInputs, "spline has " + std::to_string(S.knots().n()) +
                                                  " intervals but n = " + std::to_string(n));
  }
  const Partition T = chebyshev_partition(n);
  for (int j = 0; j <= n; ++j) {
    if (std::abs(T[j] - S.knots()[j]) > 1e-13) {
      throw Error(ErrorCode::kMismatchedInputs, "spline knots are not the Chebyshev partition");
    }
  }
}

}  // namespace

const char* bound_id_name(BoundId id) noexcept { return kBoundNames[index_of(id)]; }

std::optional<BoundId> parse_bound_id(std::string_view name) {
  for (BoundId id : kAllBounds) {
    if (name == bound_id_name(id)) return id;
  }
  return std::nullopt;
}

CertificationContext::CertificationContext(ConvexOracle f, int r, int modulus_grid)
    : f_(std::move(f)), r_(r), modulus_grid_(modulus_grid) {
  if (r_ < 0 || r_ > f_.smoothness()) {
    throw Error(ErrorCode::kInvalidOrder, "certification order exceeds the smoothness of f");
  }
  const Interval d = f_.domain();
  top_ = f_.derivative_function(r_);
  const auto bps = breakpoints_in(f_, d.a, d.b);
  omega1_ = std::make_shared<ModulusProfile>(top_, 1, d.a, d.b, modulus_grid_, bps);
  omega2_ = std::make_shared<ModulusProfile>(top_, 2, d.a, d.b, modulus_grid_, bps);
}

BoundReport CertificationContext::report(const PiecewisePoly& S, int n, BoundId id,
                                         int grid_size) const {
  check_partition(S, n);
  if (grid_size < 2) throw Error(ErrorCode::kInvalidArgument, "bound grid needs at least 2 points");
  const Partition& X = S.knots();
  const double a = X.front();
  const double b = X.back();
  const double x1 = X[1];
  const double xl = X[n - 1];
  const double strip = 1.0 / (static_cast<double>(n) * n);

  std::vector<double> xs;
  switch (id) {
    case BoundId::kGlobal:
      chebyshev_grid(a, b, grid_size, xs);
      break;
    case BoundId::kStripSecond:
    case BoundId::kStripFirst:
      chebyshev_grid(a, a + strip, grid_size / 2, xs);
      chebyshev_grid(b - strip, b, grid_size - grid_size / 2, xs);
      break;
    case BoundId::kFirstInterval:
      chebyshev_grid(a, x1, grid_size, xs);
      break;
    case BoundId::kLastInterval:
      chebyshev_grid(xl, b, grid_size, xs);
      break;
    case BoundId::kInterior:
      if (n >= 3) chebyshev_grid(x1, xl, grid_size, xs);
      break;
  }

  // Moduli over the end intervals for the general-partition estimates.
  std::vector<ModulusProfile> first_profiles;
  std::vector<ModulusProfile> last_profiles;
  const bool needs_ends = id == BoundId::kFirstInterval || id == BoundId::kLastInterval ||
                          id == BoundId::kInterior;
  if (needs_ends) {
    for (int k = 1; k <= 2; ++k) {
      if (id != BoundId::kLastInterval) {
        first_profiles.emplace_back(top_, k, a, x1, modulus_grid_, breakpoints_in(f_, a, x1));
      }
      if (id != BoundId::kFirstInterval) {
        last_profiles.emplace_back(top_, k, xl, b, modulus_grid_, breakpoints_in(f_, xl, b));
      }
    }
  }
  double end_terms = 0.0;
  std::vector<double> interval_terms;
  if (id == BoundId::kInterior) {
    end_terms = ipow(x1 - a, r_) * first_profiles[1](x1 - a) +
                ipow(b - xl, r_) * last_profiles[1](b - xl);
    interval_terms.assign(static_cast<std::size_t>(n) + 1, -1.0);
  }

  auto bound_at = [&](double x) {
    const double ph = phi(x);
    switch (id) {
      case BoundId::kGlobal:
        return ipow(ph / n, r_) * (*omega2_)(ph / n);
      case BoundId::kStripSecond:
        return ipow(ph, 2 * r_) * (*omega2_)(ph / n);
      case BoundId::kStripFirst:
        return ipow(ph, 2 * r_) * (*omega1_)(ph * ph);
      case BoundId::kFirstInterval:
        return ipow(x - a, r_) * one_sided_from_profiles(first_profiles, x, Side::kLeft);
      case BoundId::kLastInterval:
        return ipow(b - x, r_) * one_sided_from_profiles(last_profiles, x, Side::kRight);
      case BoundId::kInterior: {
        const int j = std::clamp(X.interval_of(x), 2, n - 1);
        double& term = interval_terms[static_cast<std::size_t>(j)];
        if (term < 0.0) {
          const double lo = X[j - 1];
          const double hi = X[j];
          const auto bps = breakpoints_in(f_, lo, hi);
          term = ipow(hi - lo, r_) *
                 modulus(top_, 2, hi - lo, lo, hi, kInteriorModulusGrid, bps).value;
        }
        return term + end_terms;
      }
    }
    return 0.0;
  };

  BoundReport rep;
  rep.id = id;
  double scale = 0.0;
  std::vector<BoundSample> samples;
  std::vector<double> noise;
  samples.reserve(xs.size());
  for (double x : xs) {
    BoundSample s;
    s.x = x;
    const double fx = f_(x);
    const double sx = S(x);
    s.error = std::abs(fx - sx);
    s.bound = bound_at(x);
    scale = std::max(scale, std::abs(fx));
    const std::size_t piece = static_cast<std::size_t>(X.interval_of(x) - 1);
    noise.push_back(4.0 * kEps * (std::abs(fx) + S.pieces()[piece].abs_eval(x)));
    samples.push_back(s);
  }
  rep.atol = 1e-10 * scale;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    BoundSample& s = samples[i];
    if (s.bound <= 100.0 * noise[i]) {
      s.ratio = 0.0;
      if (s.error > rep.atol) rep.excluded_ok = false;
      rep.excluded_points.push_back(s);
      continue;
    }
    // Only the part of the error above the rounding level of f - S counts.
    s.ratio = std::max(0.0, s.error - noise[i]) / s.bound;
    if (s.ratio > rep.sup_ratio || !std::isfinite(s.ratio)) {
      rep.sup_ratio = s.ratio;
      rep.sup_x = s.x;
    }
    rep.grid.push_back(s);
  }
  return rep;
}

BoundReport pointwise_bound_report(const ConvexOracle& f, const PiecewisePoly& S, int r, int n,
                                   BoundId id, int grid_size, int modulus_grid) {
  return CertificationContext(f, r, modulus_grid).report(S, n, id, grid_size);
}

std::vector<SweepRow> sweep(const ConvexOracle& f, int r, std::span<const int> n_list,
                            const SweepOptions& options) {
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2) throw Error(ErrorCode::kInvalidN, "sweep: every n must be at least 2");
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "sweep: n list must be strictly ascending");
    }
  }
  const GlueTrace trace = admissible_width(f, {-1.0, 1.0}, r, options.glue);
  const int threshold = trace.affine ? 2 : chebyshev_threshold(2.0 * trace.H);
  const CertificationContext context(f, r, options.modulus_grid);

  std::vector<SweepRow> rows(n_list.size());
  auto work = [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.n = n_list[i];
    row.n_threshold = threshold;
    if (row.n < threshold) return;
    const auto start = std::chrono::steady_clock::now();
    const ChebyshevResult res = construct_chebyshev(f, r, row.n, options.glue);
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    for (BoundId id : kAllBounds) {
      row.sup_ratio[index_of(id)] = context.report(res.spline, row.n, id, options.grid_size).sup_ratio;
    }
    row.computed = true;
  };

  const std::size_t jobs =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.jobs, 1)), 1, rows.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) work(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(rows.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) {
        try {
          work(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string sweep_csv(std::span<const SweepRow> rows, bool timing) {
  std::string out = "n,N_threshold";
  for (BoundId id : kAllBounds) {
    out += ",sup_ratio_";
    std::string name = bound_id_name(id);
    std::replace(name.begin(), name.end(), '.', '_');
    out += name;
  }
  out += ",wall_ms\n";
  for (const auto& row : rows) {
    out += std::to_string(row.n) + "," + std::to_string(row.n_threshold);
    for (double v : row.sup_ratio) {
      out += ",";
      if (row.computed) {
        append_number(out, v);
      } else {
        out += "NA";
      }
    }
    out += ",";
    if (row.computed && timing) {
      append_number(out, row.wall_ms);
    } else {
      out += "NA";
    }
    out += "\n";
  }
  return out;
}

CounterexampleWitness counterexample_witness(int r, int m, double x_last,
                                             std::optional<double> epsilon) {
  if (r < 1 || m < 1) throw Error(ErrorCode::kInvalidArgument, "counterexample: need r, m >= 1");
  if (!(x_last > -1.0 && x_last < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "counterexample: x_last must lie in (-1, 1)");
  }
  CounterexampleWitness w;
  w.r = r;
  w.m = m;
  w.x_last = x_last;
  const double gap = 1.0 - x_last;
  const double markov = 2.0 * (m - 1.0) * (m - 1.0) / gap;
  // Order 1 means constant pieces: the Markov factor vanishes and every epsilon works.
  w.epsilon_threshold = m == 1 ? std::numeric_limits<double>::infinity()
                               : (r + 1.0) * gap / (2.0 * (m - 1.0) * (m - 1.0));
  if (epsilon) {
    if (!(*epsilon > 0.0) || !std::isfinite(*epsilon)) {
      throw Error(ErrorCode::kInvalidArgument, "counterexample: epsilon must be positive");
    }
    w.epsilon = *epsilon;
  } else {
    w.epsilon = std::min(0.5 * w.epsilon_threshold, 1.0);
  }
  w.markov_lhs = (r + 1.0) * std::pow(w.epsilon, r);
  w.markov_rhs = markov * std::pow(w.epsilon, r + 1);
  // lhs > rhs divided through by markov * eps^(r+1) > 0; comparing the
  // quotient avoids rounding in the two powers.
  w.contradiction = w.epsilon < w.epsilon_threshold;
  return w;
}

PolynomialWitness polynomial_witness(int r, int n) {
  if (r < 1 || n < 1) throw Error(ErrorCode::kInvalidArgument, "polynomial witness: need r, n >= 1");
  PolynomialWitness w;
  w.r = r;
  w.n = n;
  const double n2 = static_cast<double>(n) * n;
  w.epsilon = 1.0 / n2;
  w.markov_lhs = (r + 1.0) * std::pow(w.epsilon, r);
  w.markov_rhs = n2 * std::pow(w.epsilon, r + 1);
  w.ratio = (r + 1.0) / (n2 * w.epsilon);
  w.contradiction = w.ratio > 1.0;
  return w;
}

ThresholdGrowth threshold_growth(int r, std::span<const double> eps_list, const GlueConfig& config) {
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "threshold_growth: eps list must be descending");
    }
  }
  ThresholdGrowth out;
  for (double eps : eps_list) {
    const ConvexOracle f = oracles::truncated_power(r, eps);
    out.rows.push_back({eps, chebyshev_threshold_for(f, r, config)});
    if (out.rows.size() > 1 && out.rows.back().n_threshold < out.rows[out.rows.size() - 2].n_threshold) {
      out.nondecreasing = false;
    }
  }
  return out;
}

}  // namespace convexlab
