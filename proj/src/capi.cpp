#include "convexlab/convexlab.h"

#include <cmath>
#include <cstring>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "convexlab/certify.hpp"
#include "convexlab/error.hpp"
#include "convexlab/glue.hpp"
#include "convexlab/serialize.hpp"
#include "convexlab/smoothness.hpp"

struct cvx_oracle {
  std::string spec;
  convexlab::ConvexOracle f;
};

struct cvx_spline {
  convexlab::PiecewisePoly s;
  std::optional<convexlab::GlueTrace> trace;
  std::optional<convexlab::SplineMeta> meta;
};

namespace {

using namespace convexlab;

constexpr int kReproductionGrid = 4097;

thread_local std::string last_message;
thread_local double last_payload = 0.0;

cvx_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return CVX_INVALID_ARGUMENT;
    case ErrorCode::kParse: return CVX_PARSE;
    case ErrorCode::kDegenerateNodes: return CVX_DEGENERATE_NODES;
    case ErrorCode::kIllConditioned: return CVX_ILL_CONDITIONED;
    case ErrorCode::kInvalidOrder: return CVX_INVALID_ORDER;
    case ErrorCode::kInvalidN: return CVX_INVALID_N;
    case ErrorCode::kNotConvexInput: return CVX_NOT_CONVEX_INPUT;
    case ErrorCode::kNoConvexityThreshold: return CVX_NO_CONVEXITY_THRESHOLD;
    case ErrorCode::kPartitionTooCoarse: return CVX_PARTITION_TOO_COARSE;
    case ErrorCode::kNBelowThreshold: return CVX_N_BELOW_THRESHOLD;
    case ErrorCode::kNotConvexOutput: return CVX_NOT_CONVEX_OUTPUT;
    case ErrorCode::kMismatchedInputs: return CVX_MISMATCHED_INPUTS;
    case ErrorCode::kIo: return CVX_IO;
  }
  return CVX_INTERNAL;
}

cvx_status fail(cvx_status status, const std::string& message, double payload = 0.0) {
  last_message = message;
  last_payload = payload;
  return status;
}

template <typename Fn>
cvx_status guarded(Fn&& fn) {
  try {
    last_message.clear();
    last_payload = 0.0;
    return fn();
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what(), e.payload());
  } catch (const nlohmann::json::exception& e) {
    return fail(CVX_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CVX_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CVX_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

GlueConfig glue_config(const cvx_glue_config* c) {
  GlueConfig g;
  if (c) {
    g.c0 = c->c0;
    g.h_max = c->h_max;
  }
  return g;
}

cvx_glue_trace to_c(const GlueTrace& t) {
  return {t.M,         t.x_star, t.H1,         t.H,       t.delta, t.delta_tilde,
          t.delta_hat, t.gluing_case, t.lambda, t.c0_used, t.affine ? 1 : 0};
}

SplineMeta describe(const cvx_oracle& f, const PiecewisePoly& s, int r, int n_threshold) {
  SplineMeta meta;
  meta.function = f.spec;
  meta.r = r;
  meta.n = s.knots().n();
  meta.n_threshold = n_threshold;
  const double a = s.knots().front();
  const double b = s.knots().back();
  double norm = 0.0;
  double err = 0.0;
  for (int i = 0; i < kReproductionGrid; ++i) {
    const double x = i + 1 == kReproductionGrid ? b : a + (b - a) * i / (kReproductionGrid - 1);
    const double fx = f.f(x);
    norm = std::max(norm, std::abs(fx));
    err = std::max(err, std::abs(fx - s(x)));
  }
  meta.max_grid_error = err;
  meta.reproduction = err <= 1e-9 * norm;
  return meta;
}

#define CVX_REQUIRE(cond, what) \
  if (!(cond)) return fail(CVX_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* cvx_status_name(cvx_status status) {
  switch (status) {
    case CVX_OK: return "Ok";
    case CVX_INVALID_ARGUMENT: return "InvalidArgument";
    case CVX_PARSE: return "Parse";
    case CVX_DEGENERATE_NODES: return "DegenerateNodes";
    case CVX_ILL_CONDITIONED: return "IllConditioned";
    case CVX_INVALID_ORDER: return "InvalidOrder";
    case CVX_INVALID_N: return "InvalidN";
    case CVX_NOT_CONVEX_INPUT: return "NotConvexInput";
    case CVX_NO_CONVEXITY_THRESHOLD: return "NoConvexityThreshold";
    case CVX_PARTITION_TOO_COARSE: return "PartitionTooCoarse";
    case CVX_N_BELOW_THRESHOLD: return "NBelowThreshold";
    case CVX_NOT_CONVEX_OUTPUT: return "NotConvexOutput";
    case CVX_MISMATCHED_INPUTS: return "MismatchedInputs";
    case CVX_IO: return "Io";
    case CVX_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* cvx_last_error_message(void) { return last_message.c_str(); }
double cvx_last_error_payload(void) { return last_payload; }
void cvx_string_free(char* s) { delete[] s; }

cvx_status cvx_oracle_parse(const char* spec, cvx_oracle** out) {
  return guarded([&] {
    CVX_REQUIRE(spec && out, "null argument");
    *out = new cvx_oracle{spec, parse_oracle(spec)};
    return CVX_OK;
  });
}

void cvx_oracle_free(cvx_oracle* f) { delete f; }

int cvx_oracle_smoothness(const cvx_oracle* f) { return f ? f->f.smoothness() : -1; }

cvx_status cvx_oracle_eval(const cvx_oracle* f, int order, double x, double* out) {
  return guarded([&] {
    CVX_REQUIRE(f && out, "null argument");
    *out = f->f.derivative(order, x);
    return CVX_OK;
  });
}

void cvx_glue_config_default(cvx_glue_config* config) {
  if (!config) return;
  const GlueConfig g;
  config->c0 = g.c0;
  config->h_max = g.h_max;
}

cvx_status cvx_chebyshev_threshold(const cvx_oracle* f, int r, const cvx_glue_config* config,
                                   int* out) {
  return guarded([&] {
    CVX_REQUIRE(f && out, "null argument");
    *out = chebyshev_threshold_for(f->f, r, glue_config(config));
    return CVX_OK;
  });
}

cvx_status cvx_approximate_chebyshev(const cvx_oracle* f, int r, int n,
                                     const cvx_glue_config* config, cvx_spline** out) {
  return guarded([&] {
    CVX_REQUIRE(f && out, "null argument");
    ChebyshevResult res = construct_chebyshev(f->f, r, n, glue_config(config));
    const SplineMeta meta = describe(*f, res.spline, r, res.n_threshold);
    *out = new cvx_spline{std::move(res.spline), res.trace, meta};
    return CVX_OK;
  });
}

cvx_status cvx_approximate_partition(const cvx_oracle* f, int r, const double* knots,
                                     size_t knot_count, const cvx_glue_config* config,
                                     cvx_spline** out) {
  return guarded([&] {
    CVX_REQUIRE(f && knots && out, "null argument");
    Partition X(std::vector<double>(knots, knots + knot_count));
    SplineResult res = construct_spline(f->f, X, r, glue_config(config));
    const SplineMeta meta = describe(*f, res.spline, r, 0);
    *out = new cvx_spline{std::move(res.spline), res.trace, meta};
    return CVX_OK;
  });
}

cvx_status cvx_approximate_partition_file(const cvx_oracle* f, int r, const char* path,
                                          const cvx_glue_config* config, cvx_spline** out) {
  return guarded([&] {
    CVX_REQUIRE(f && path && out, "null argument");
    SplineResult res = construct_spline(f->f, read_partition(path), r, glue_config(config));
    const SplineMeta meta = describe(*f, res.spline, r, 0);
    *out = new cvx_spline{std::move(res.spline), res.trace, meta};
    return CVX_OK;
  });
}

cvx_status cvx_polygonal_baseline(const cvx_oracle* f, int n, cvx_spline** out) {
  return guarded([&] {
    CVX_REQUIRE(f && out, "null argument");
    PiecewisePoly s = polygonal_baseline(f->f, n);
    *out = new cvx_spline{std::move(s), std::nullopt, std::nullopt};
    return CVX_OK;
  });
}

void cvx_spline_free(cvx_spline* s) { delete s; }

int cvx_spline_intervals(const cvx_spline* s) { return s ? s->s.knots().n() : 0; }
int cvx_spline_order(const cvx_spline* s) { return s ? s->s.order() : 0; }
int cvx_spline_convex_certified(const cvx_spline* s) {
  return s && s->s.convex_certified() ? 1 : 0;
}
cvx_status cvx_spline_get_info(const cvx_spline* s, cvx_spline_info* out) {
  return guarded([&] {
    CVX_REQUIRE(s && out, "null argument");
    *out = {};
    if (s->meta) {
      const SplineMeta& m = *s->meta;
      *out = {1, m.r, m.n, m.n_threshold, m.max_grid_error, m.reproduction ? 1 : 0};
    }
    return CVX_OK;
  });
}

const char* cvx_spline_function(const cvx_spline* s) {
  return s && s->meta ? s->meta->function.c_str() : "";
}

cvx_status cvx_spline_knots(const cvx_spline* s, double* out, size_t capacity) {
  return guarded([&] {
    CVX_REQUIRE(s && out, "null argument");
    const auto& k = s->s.knots().knots();
    CVX_REQUIRE(capacity >= k.size(), "knot buffer too small");
    std::copy(k.begin(), k.end(), out);
    return CVX_OK;
  });
}

cvx_status cvx_spline_eval(const cvx_spline* s, int order, double x, double* out) {
  return guarded([&] {
    CVX_REQUIRE(s && out, "null argument");
    CVX_REQUIRE(order >= 0, "negative derivative order");
    *out = s->s.derivative(order, x);
    return CVX_OK;
  });
}

cvx_status cvx_spline_trace(const cvx_spline* s, cvx_glue_trace* out) {
  return guarded([&] {
    CVX_REQUIRE(s && out, "null argument");
    CVX_REQUIRE(s->trace.has_value(), "spline carries no construction trace");
    *out = to_c(*s->trace);
    return CVX_OK;
  });
}

cvx_status cvx_spline_verify_convexity(const cvx_spline* s, int* convex) {
  return guarded([&] {
    CVX_REQUIRE(s && convex, "null argument");
    *convex = verify_convexity(s->s).convex ? 1 : 0;
    return CVX_OK;
  });
}

cvx_status cvx_spline_max_seam_mismatch(const cvx_spline* s, double* out) {
  return guarded([&] {
    CVX_REQUIRE(s && out, "null argument");
    *out = s->s.max_seam_mismatch();
    return CVX_OK;
  });
}

cvx_status cvx_spline_to_json(const cvx_spline* s, char** out) {
  return guarded([&] {
    CVX_REQUIRE(s && out, "null argument");
    const GlueTrace* trace = s->trace ? &*s->trace : nullptr;
    const SplineMeta* meta = s->meta ? &*s->meta : nullptr;
    *out = copy_string(dump(spline_to_json(s->s, trace, meta)));
    return CVX_OK;
  });
}

cvx_status cvx_spline_from_json(const char* json, cvx_spline** out) {
  return guarded([&] {
    CVX_REQUIRE(json && out, "null argument");
    const Json j = Json::parse(json);
    SplineDocument doc = spline_from_json(j);
    *out = new cvx_spline{std::move(doc.spline), doc.trace, doc.meta};
    return CVX_OK;
  });
}

cvx_status cvx_certify(const cvx_oracle* f, const cvx_spline* s, int r, int n,
                       const char* bound_id, int grid_size, cvx_bound_summary* out,
                       char** report_json) {
  return guarded([&] {
    CVX_REQUIRE(f && s && bound_id && out, "null argument");
    const auto id = parse_bound_id(bound_id);
    if (!id) return fail(CVX_PARSE, std::string("unknown bound id '") + bound_id + "'");
    CVX_REQUIRE(grid_size >= 2, "grid size must be at least 2");
    const BoundReport rep = pointwise_bound_report(f->f, s->s, r, n, *id, grid_size);
    *out = {rep.sup_ratio,          rep.sup_x,          rep.atol, rep.excluded_ok ? 1 : 0,
            rep.excluded_points.size(), rep.grid.size()};
    if (report_json) *report_json = copy_string(dump(bound_report_to_json(rep)));
    return CVX_OK;
  });
}

void cvx_sweep_options_default(cvx_sweep_options* options) {
  if (!options) return;
  const SweepOptions d;
  options->grid_size = d.grid_size;
  options->modulus_grid = d.modulus_grid;
  cvx_glue_config_default(&options->glue);
  options->jobs = d.jobs;
  options->timing = d.timing ? 1 : 0;
}

cvx_status cvx_sweep_csv(const cvx_oracle* f, int r, const int* n_list, size_t count,
                         const cvx_sweep_options* options, char** csv) {
  return guarded([&] {
    CVX_REQUIRE(f && n_list && csv, "null argument");
    SweepOptions opts;
    if (options) {
      opts.grid_size = options->grid_size;
      opts.modulus_grid = options->modulus_grid;
      opts.glue = glue_config(&options->glue);
      opts.jobs = options->jobs;
      opts.timing = options->timing != 0;
    }
    const std::vector<SweepRow> rows = sweep(f->f, r, std::span<const int>(n_list, count), opts);
    *csv = copy_string(sweep_csv(rows, opts.timing));
    return CVX_OK;
  });
}

cvx_status cvx_counterexample_witness(int r, int m, double x_last, double epsilon,
                                      cvx_counterexample* out) {
  return guarded([&] {
    CVX_REQUIRE(out, "null argument");
    std::optional<double> eps;
    if (!std::isnan(epsilon)) eps = epsilon;
    const CounterexampleWitness w = counterexample_witness(r, m, x_last, eps);
    *out = {w.r,          w.m,          w.x_last,          w.epsilon,
            w.markov_lhs, w.markov_rhs, w.epsilon_threshold, w.contradiction ? 1 : 0};
    return CVX_OK;
  });
}

cvx_status cvx_polynomial_witness_compute(int r, int n, cvx_polynomial_witness* out) {
  return guarded([&] {
    CVX_REQUIRE(out, "null argument");
    const PolynomialWitness w = polynomial_witness(r, n);
    *out = {w.r, w.n, w.epsilon, w.markov_lhs, w.markov_rhs, w.ratio, w.contradiction ? 1 : 0};
    return CVX_OK;
  });
}

cvx_status cvx_threshold_growth(int r, const double* eps, size_t count,
                                const cvx_glue_config* config, int* thresholds_out,
                                int* nondecreasing) {
  return guarded([&] {
    CVX_REQUIRE(eps && thresholds_out, "null argument");
    const ThresholdGrowth g =
        threshold_growth(r, std::span<const double>(eps, count), glue_config(config));
    for (std::size_t i = 0; i < g.rows.size(); ++i) thresholds_out[i] = g.rows[i].n_threshold;
    if (nondecreasing) *nondecreasing = g.nondecreasing ? 1 : 0;
    return CVX_OK;
  });
}

cvx_status cvx_modulus(const cvx_oracle* f, int derivative_order, int k, double t, double a,
                       double b, int grid, cvx_modulus_result* out) {
  return guarded([&] {
    CVX_REQUIRE(f && out, "null argument");
    CVX_REQUIRE(a < b, "interval requires a < b");
    CVX_REQUIRE(t >= 0.0, "t must be nonnegative");
    CVX_REQUIRE(grid >= 64, "grid must be at least 64");
    const ModulusResult m = modulus(f->f.derivative_function(derivative_order), k, t, a, b, grid,
                                    f->f.breakpoints());
    *out = {m.value, m.arg_u, m.arg_x, m.grid_density};
    return CVX_OK;
  });
}

}  // extern "C"
