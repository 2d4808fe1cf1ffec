#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "convexlab/certify.hpp"
#include "convexlab/domain.hpp"
#include "convexlab/error.hpp"
#include "convexlab/glue.hpp"
#include "oracles.hpp"

using namespace convexlab;

namespace {

// f itself written as a piecewise polynomial on T_n.
PiecewisePoly exact_pieces(std::vector<double> monomials, int n) {
  const Partition T = chebyshev_partition(n);
  std::vector<Poly> pieces;
  for (int j = 1; j <= n; ++j) {
    pieces.push_back(Poly::from_monomials(monomials).rebased(0.5 * (T[j - 1] + T[j]), 0.5 * (T[j] - T[j - 1])));
  }
  return PiecewisePoly(T, pieces, static_cast<int>(monomials.size()));
}

}  // namespace

TEST_CASE("bound identifiers") {
  for (BoundId id : kAllBounds) {
    const auto back = parse_bound_id(bound_id_name(id));
    REQUIRE(back.has_value());
    CHECK(*back == id);
  }
  CHECK(std::string(bound_id_name(BoundId::kGlobal)) == "2.3");
  CHECK(std::string(bound_id_name(BoundId::kInterior)) == "2.13");
  CHECK_FALSE(parse_bound_id("2.7").has_value());
  CHECK_FALSE(parse_bound_id("").has_value());
}

TEST_CASE("S equal to f gives zero ratios") {
  const std::vector<double> sq = {0.0, 0.0, 1.0};
  const PiecewisePoly S = exact_pieces(sq, 16);
  for (BoundId id : kAllBounds) {
    const BoundReport rep = pointwise_bound_report(oracles::even_power(1), S, 1, 16, id, 257, 256);
    CAPTURE(bound_id_name(id));
    CHECK(rep.sup_ratio <= 1e-12);
    CHECK(rep.excluded_ok);
    CHECK(rep.grid.size() + rep.excluded_points.size() == 257);
  }
}

TEST_CASE("x^4 with r = 3 is reproduced") {
  const ConvexOracle f = oracles::even_power(2);
  const ChebyshevResult res = construct_chebyshev(f, 3, 32);
  const CertificationContext ctx(f, 3, 512);
  for (BoundId id : kAllBounds) {
    const BoundReport rep = ctx.report(res.spline, 32, id, 513);
    CAPTURE(bound_id_name(id));
    CHECK(rep.sup_ratio == 0.0);
    CHECK(rep.excluded_ok);
    for (const BoundSample& s : rep.grid) CHECK(s.error <= rep.atol);
  }
}

TEST_CASE("endpoints are excluded and interpolated") {
  const ConvexOracle f = oracles::exponential(1.0);
  const int n = 32;
  const ChebyshevResult res = construct_chebyshev(f, 1, n);
  const BoundReport rep = pointwise_bound_report(f, res.spline, 1, n, BoundId::kGlobal, 257, 512);
  bool saw_left = false;
  bool saw_right = false;
  for (const BoundSample& s : rep.excluded_points) {
    saw_left = saw_left || s.x == -1.0;
    saw_right = saw_right || s.x == 1.0;
    CHECK(s.error <= rep.atol);
  }
  CHECK(saw_left);
  CHECK(saw_right);
  CHECK(rep.excluded_ok);
  CHECK(rep.atol == doctest::Approx(1e-10 * std::exp(1.0)));
  CHECK(std::isfinite(rep.sup_ratio));
  CHECK(rep.sup_ratio > 0.0);
}

TEST_CASE("global bound samples agree with a brute-force evaluation") {
  const ConvexOracle f = oracles::exponential(1.0);
  const int n = 32;
  const ChebyshevResult res = construct_chebyshev(f, 1, n);
  const BoundReport rep = pointwise_bound_report(f, res.spline, 1, n, BoundId::kGlobal, 65, 2048);
  const auto fp = [](double x) { return std::exp(x); };
  int checked = 0;
  for (const BoundSample& s : rep.grid) {
    if (std::abs(s.x) > 0.98 || checked >= 8) continue;
    ++checked;
    const double step = std::sqrt(1.0 - s.x * s.x) / n;
    const double w2 = testref::brute_modulus(fp, 2, step, -1.0, 1.0, 600, 60);
    CHECK(s.error == doctest::Approx(std::abs(f(s.x) - res.spline(s.x))).scale(1e-300));
    CHECK(s.bound == doctest::Approx(step * w2).epsilon(0.05));
    CHECK(s.ratio <= s.error / s.bound);
    CHECK(s.ratio == doctest::Approx(s.error / s.bound).epsilon(1e-6));
  }
  CHECK(checked == 8);
  double max_ratio = 0.0;
  for (const BoundSample& s : rep.grid) max_ratio = std::max(max_ratio, s.ratio);
  CHECK(rep.sup_ratio == max_ratio);
}

TEST_CASE("strip bounds live on the strips") {
  const ConvexOracle f = oracles::hyperbolic_cosine(1.0);
  const int n = 16;
  const ChebyshevResult res = construct_chebyshev(f, 2, n);
  for (BoundId id : {BoundId::kStripSecond, BoundId::kStripFirst}) {
    const BoundReport rep = pointwise_bound_report(f, res.spline, 2, n, id, 129, 512);
    for (const BoundSample& s : rep.grid) CHECK(1.0 - std::abs(s.x) <= 1.0 / (n * n) + 1e-15);
    CHECK(std::isfinite(rep.sup_ratio));
  }
  const BoundReport first = pointwise_bound_report(f, res.spline, 2, n, BoundId::kFirstInterval, 65, 512);
  const Partition T = chebyshev_partition(n);
  for (const BoundSample& s : first.grid) CHECK(s.x <= T[1] + 1e-15);
}

TEST_CASE("spline on another partition is rejected") {
  const ConvexOracle f = oracles::exponential(1.0);
  const ChebyshevResult res = construct_chebyshev(f, 1, 16);
  try {
    pointwise_bound_report(f, res.spline, 1, 32, BoundId::kGlobal, 65, 256);
    FAIL("expected MismatchedInputs");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMismatchedInputs);
  }
}

TEST_CASE("counterexample witness: worked example") {
  const CounterexampleWitness w = counterexample_witness(1, 3, 0.9);
  CHECK(w.epsilon_threshold == doctest::Approx(0.025));
  CHECK(w.epsilon == doctest::Approx(0.0125));
  CHECK(w.contradiction);

  const CounterexampleWitness v = counterexample_witness(1, 3, 0.9, 0.01);
  CHECK(v.markov_lhs == doctest::Approx(0.02));
  CHECK(v.markov_rhs == doctest::Approx(0.008));
  CHECK(v.contradiction);

  CHECK_FALSE(counterexample_witness(1, 3, 0.9, 0.03).contradiction);
  CHECK(std::isinf(counterexample_witness(2, 1, 0.5).epsilon_threshold));
  CHECK_THROWS_AS(counterexample_witness(0, 3, 0.9), Error);
  CHECK_THROWS_AS(counterexample_witness(1, 3, 1.0), Error);
  CHECK_THROWS_AS(counterexample_witness(1, 3, 0.9, -1.0), Error);
}

TEST_CASE("counterexample witness: contradiction iff epsilon below the threshold") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> R(1, 4);
  std::uniform_int_distribution<int> M(2, 8);
  std::uniform_real_distribution<double> X(-0.99, 0.99);
  std::uniform_real_distribution<double> F(0.2, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int r = R(rng);
    const int m = M(rng);
    const double x = X(rng);
    const double threshold = (r + 1.0) * (1.0 - x) / (2.0 * (m - 1.0) * (m - 1.0));
    const double eps = trial % 10 == 0 ? threshold : threshold * F(rng);
    const CounterexampleWitness w = counterexample_witness(r, m, x, eps);
    CHECK(w.epsilon_threshold == threshold);
    CHECK(w.contradiction == (eps < threshold));
    CHECK(w.markov_lhs == doctest::Approx((r + 1.0) * std::pow(eps, r)));
    CHECK(w.markov_rhs == doctest::Approx(2.0 * (m - 1.0) * (m - 1.0) / (1.0 - x) * std::pow(eps, r + 1)));
    // Away from equality the Markov chain itself decides.
    if (std::abs(eps / threshold - 1.0) > 1e-6) CHECK(w.contradiction == (w.markov_lhs > w.markov_rhs));
  }
}

TEST_CASE("polynomial witness ratio is r + 1") {
  for (int r : {1, 2, 3}) {
    for (int n = 4; n <= 64; ++n) {
      const PolynomialWitness w = polynomial_witness(r, n);
      CHECK(w.epsilon == doctest::Approx(1.0 / (n * n)));
      CHECK(w.ratio == doctest::Approx(r + 1.0));
      CHECK(w.markov_lhs / w.markov_rhs == doctest::Approx(r + 1.0));
      CHECK(w.contradiction);
    }
  }
}

TEST_CASE("threshold growth") {
  const double eps[] = {0.1, 0.01, 0.001};
  const ThresholdGrowth g = threshold_growth(1, eps);
  REQUIRE(g.rows.size() == 3);
  CHECK(g.nondecreasing);
  CHECK(g.rows[2].n_threshold > g.rows[0].n_threshold);
  for (const ThresholdRow& row : g.rows) {
    CHECK(row.n_threshold == chebyshev_threshold_for(oracles::truncated_power(1, row.epsilon), 1));
  }
  const double one[] = {0.01};
  CHECK(threshold_growth(2, one).rows[0].n_threshold > 0);
  const double ascending[] = {0.01, 0.1};
  CHECK_THROWS_AS(threshold_growth(1, ascending), Error);
}

TEST_CASE("sweep rows and CSV") {
  const ConvexOracle f = oracles::truncated_power(1, 0.1);
  const int N = chebyshev_threshold_for(f, 1);
  const std::vector<int> ns = {N - 1, N, 2 * N};
  SweepOptions opt;
  opt.grid_size = 129;
  opt.modulus_grid = 256;
  const std::vector<SweepRow> rows = sweep(f, 1, ns, opt);
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0].computed);
  CHECK(rows[1].computed);
  CHECK(rows[2].computed);
  for (const SweepRow& row : rows) CHECK(row.n_threshold == N);

  const std::string csv = sweep_csv(rows, false);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,N_threshold,sup_ratio_2_3,sup_ratio_2_4,sup_ratio_2_5,sup_ratio_2_11,sup_ratio_2_12,sup_ratio_2_13,wall_ms");
  std::getline(in, line);
  CHECK(line == std::to_string(N - 1) + "," + std::to_string(N) + ",NA,NA,NA,NA,NA,NA,NA");
  std::getline(in, line);
  CHECK(line.rfind(std::to_string(N) + "," + std::to_string(N) + ",", 0) == 0);
  CHECK(line.substr(line.size() - 3) == ",NA");
  CHECK(line.find("NA,") == std::string::npos);

  SweepOptions parallel = opt;
  parallel.jobs = 3;
  CHECK(sweep_csv(sweep(f, 1, ns, parallel), false) == csv);
  CHECK(sweep_csv(sweep(f, 1, ns, opt), false) == csv);
}

TEST_CASE("global ratio stays bounded as n grows") {
  const std::vector<std::pair<ConvexOracle, int>> members = {
      {oracles::exponential(1.0), 1}, {oracles::exponential(1.0), 2},
      {oracles::hyperbolic_cosine(1.0), 1}, {oracles::sqrt_singular(1), 1},
      {oracles::sqrt_singular(2), 2}};
  const std::vector<int> ns = {32, 64, 128, 256};
  SweepOptions opt;
  opt.grid_size = 513;
  opt.modulus_grid = 1024;
  for (const auto& [f, r] : members) {
    const std::vector<SweepRow> rows = sweep(f, r, ns, opt);
    CAPTURE(f.family());
    CAPTURE(r);
    for (const SweepRow& row : rows) REQUIRE(row.computed);
    for (std::size_t i = 2; i < rows.size(); ++i) {
      const double now = rows[i].sup_ratio[0];
      const double before = rows[i - 2].sup_ratio[0];
      CAPTURE(rows[i].n);
      CAPTURE(now);
      CAPTURE(before);
      CHECK(now <= 1.5 * before + 1e-9);
    }
    for (const SweepRow& row : rows) {
      CHECK(std::isfinite(row.sup_ratio[1]));
      CHECK(std::isfinite(row.sup_ratio[2]));
    }
  }
}
