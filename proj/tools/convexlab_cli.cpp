// Command-line front end over the convexlab C API.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "convexlab/convexlab.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitThreshold = 2;

const char* const kBoundIds[] = {"2.3", "2.4", "2.5", "2.11", "2.12", "2.13"};

struct OracleDeleter {
  void operator()(cvx_oracle* f) const { cvx_oracle_free(f); }
};
struct SplineDeleter {
  void operator()(cvx_spline* s) const { cvx_spline_free(s); }
};
struct StringDeleter {
  void operator()(char* s) const { cvx_string_free(s); }
};
using OraclePtr = std::unique_ptr<cvx_oracle, OracleDeleter>;
using SplinePtr = std::unique_ptr<cvx_spline, SplineDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Shortest round-trip representation, independent of the locale.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int report_failure(cvx_status status) {
  std::cerr << "error: " << cvx_status_name(status) << ": " << cvx_last_error_message() << "\n";
  if (status == CVX_N_BELOW_THRESHOLD) {
    std::cout << "N_threshold " << num(cvx_last_error_payload()) << "\n";
    return kExitThreshold;
  }
  if (status == CVX_PARTITION_TOO_COARSE) {
    std::cout << "admissible_H " << num(cvx_last_error_payload()) << "\n";
    return kExitThreshold;
  }
  return kExitError;
}

struct Failure {
  cvx_status status;
};

void check(cvx_status status) {
  if (status != CVX_OK) throw Failure{status};
}

OraclePtr load_oracle(const std::string& spec) {
  cvx_oracle* f = nullptr;
  check(cvx_oracle_parse(spec.c_str(), &f));
  return OraclePtr(f);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("cannot write output file: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw CLI::ValidationError("n", "not an integer: '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw CLI::ValidationError("number", "not a number: '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

// "a:b:x2" (geometric), "a:b:+d" (arithmetic), or a comma separated list.
std::vector<int> parse_n_range(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  std::vector<int> out;
  if (parts.size() == 1) {
    for (const std::string& p : split(spec, ',')) out.push_back(parse_int(p));
    return out;
  }
  if (parts.size() != 3 || parts[2].size() < 2) {
    throw CLI::ValidationError("--n", "range must be a:b:xK or a:b:+D");
  }
  const int lo = parse_int(parts[0]);
  const int hi = parse_int(parts[1]);
  const int step = parse_int(parts[2].substr(1));
  if (lo < 1 || hi < lo) throw CLI::ValidationError("--n", "range needs 1 <= a <= b");
  if (parts[2][0] == 'x') {
    if (step < 2) throw CLI::ValidationError("--n", "geometric factor must be at least 2");
    for (long long n = lo; n <= hi; n *= step) out.push_back(static_cast<int>(n));
  } else if (parts[2][0] == '+') {
    if (step < 1) throw CLI::ValidationError("--n", "arithmetic step must be positive");
    for (long long n = lo; n <= hi; n += step) out.push_back(static_cast<int>(n));
  } else {
    throw CLI::ValidationError("--n", "range step must start with 'x' or '+'");
  }
  return out;
}

int default_jobs() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

int resolve_jobs(int flag) {
  if (const char* env = std::getenv("CONVEXLAB_JOBS"); env && *env) {
    const int v = parse_int(env);
    if (v < 1) throw CLI::ValidationError("CONVEXLAB_JOBS", "must be a positive integer");
    return v;
  }
  return flag > 0 ? flag : default_jobs();
}

struct GlueFlags {
  double c0 = 0.0;
  double h_max = 0.0;

  void add_to(CLI::App* app) {
    cvx_glue_config d;
    cvx_glue_config_default(&d);
    c0 = d.c0;
    h_max = d.h_max;
    app->add_option("--c0", c0, "Endpoint block constant used for H1")->check(CLI::PositiveNumber);
    app->add_option("--h-max", h_max, "Largest normalized endpoint block width")
        ->check(CLI::Range(1e-300, 0.5));
  }
  cvx_glue_config config() const { return {c0, h_max}; }
};

// approximate

struct ApproximateArgs {
  std::string function;
  int r = 1;
  std::optional<int> n;
  std::string partition;
  std::string out;
  GlueFlags glue;
};

int cmd_approximate(const ApproximateArgs& a) {
  const OraclePtr f = load_oracle(a.function);
  const cvx_glue_config config = a.glue.config();
  cvx_spline* raw = nullptr;
  if (!a.partition.empty()) {
    check(cvx_approximate_partition_file(f.get(), a.r, a.partition.c_str(), &config, &raw));
  } else {
    check(cvx_approximate_chebyshev(f.get(), a.r, *a.n, &config, &raw));
  }
  const SplinePtr s(raw);

  cvx_spline_info info;
  check(cvx_spline_get_info(s.get(), &info));
  int convex = 0;
  check(cvx_spline_verify_convexity(s.get(), &convex));
  double seam = 0.0;
  check(cvx_spline_max_seam_mismatch(s.get(), &seam));
  cvx_glue_trace trace;
  check(cvx_spline_trace(s.get(), &trace));

  char* json = nullptr;
  check(cvx_spline_to_json(s.get(), &json));
  const StringPtr text(json);
  write_output(a.out, text.get());

  std::ostream& log = a.out.empty() || a.out == "-" ? std::cerr : std::cout;
  if (info.n_threshold > 0) log << "N_threshold " << info.n_threshold << "\n";
  log << "intervals " << info.n << "\n"
      << "gluing_case " << trace.gluing_case << " lambda " << num(trace.lambda) << "\n"
      << "convex " << (convex ? "certified" : "FAILED") << " seam_mismatch " << num(seam) << "\n"
      << "max_grid_error " << num(info.max_grid_error) << "\n"
      << "reproduction " << (info.reproduction ? "true" : "false") << "\n";
  return convex ? kExitOk : kExitError;
}

// certify

struct CertifyArgs {
  std::string function;
  int r = 1;
  int n = 0;
  std::string spline;
  std::vector<std::string> bounds;
  int grid = 2049;
  std::string out;
};

int cmd_certify(const CertifyArgs& a) {
  const OraclePtr f = load_oracle(a.function);
  std::string text;
  try {
    text = read_file(a.spline);
  } catch (const std::exception& e) {
    std::cerr << "error: Io: " << e.what() << "\n";
    return kExitError;
  }
  cvx_spline* raw = nullptr;
  if (const cvx_status st = cvx_spline_from_json(text.c_str(), &raw); st != CVX_OK) {
    std::cerr << "error: schema: " << cvx_last_error_message() << "\n";
    return kExitError;
  }
  const SplinePtr s(raw);

  cvx_spline_info info;
  check(cvx_spline_get_info(s.get(), &info));
  if (info.has_meta) {
    const std::string fn = cvx_spline_function(s.get());
    if (fn != a.function || info.r != a.r || info.n != a.n) {
      std::cerr << "error: MismatchedInputs: spline was built for " << fn << " r=" << info.r
                << " n=" << info.n << "\n";
      return kExitError;
    }
  }

  int convex = 0;
  check(cvx_spline_verify_convexity(s.get(), &convex));
  std::cout << "convexity " << (convex ? "certified" : "FAILED") << "\n";

  const std::vector<std::string> ids =
      a.bounds.empty() ? std::vector<std::string>(std::begin(kBoundIds), std::end(kBoundIds))
                       : a.bounds;
  Json doc{{"function", a.function}, {"r", a.r}, {"n", a.n}, {"convex_certified", convex != 0}};
  Json reports = Json::array();
  bool finite = true;
  for (const std::string& id : ids) {
    cvx_bound_summary sum;
    char* json = nullptr;
    check(cvx_certify(f.get(), s.get(), a.r, a.n, id.c_str(), a.grid, &sum, &json));
    const StringPtr rep(json);
    reports.push_back(Json::parse(rep.get()));
    finite = finite && std::isfinite(sum.sup_ratio);
    std::cout << id << " sup_ratio " << num(sum.sup_ratio) << " at " << num(sum.sup_x)
              << " excluded " << sum.excluded_count << (sum.excluded_ok ? " ok" : " VIOLATED")
              << "\n";
  }
  doc["reports"] = std::move(reports);
  if (!a.out.empty()) write_output(a.out, doc.dump(2) + "\n");
  return convex && finite ? kExitOk : kExitError;
}

// sweep

struct SweepArgs {
  std::string function;
  int r = 1;
  std::string n_range;
  int grid = 2049;
  int modulus_grid = 2048;
  int jobs = 0;
  bool timing = false;
  std::string out;
  GlueFlags glue;
};

int cmd_sweep(const SweepArgs& a) {
  const OraclePtr f = load_oracle(a.function);
  const std::vector<int> ns = parse_n_range(a.n_range);
  cvx_sweep_options opts;
  cvx_sweep_options_default(&opts);
  opts.grid_size = a.grid;
  opts.modulus_grid = a.modulus_grid;
  opts.glue = a.glue.config();
  opts.jobs = resolve_jobs(a.jobs);
  opts.timing = a.timing ? 1 : 0;
  char* csv = nullptr;
  check(cvx_sweep_csv(f.get(), a.r, ns.data(), ns.size(), &opts, &csv));
  const StringPtr text(csv);
  write_output(a.out, text.get());
  return kExitOk;
}

// counterexample

struct CounterexampleArgs {
  int r = 1;
  std::optional<int> m;
  double x_last = 0.0;
  std::optional<double> eps;
  std::optional<int> poly_n;
  std::string growth;
  std::string out;
  GlueFlags glue;
};

int cmd_counterexample(const CounterexampleArgs& a) {
  Json doc = Json::object();
  if (a.m) {
    cvx_counterexample w;
    check(cvx_counterexample_witness(a.r, *a.m, a.x_last, a.eps.value_or(NAN), &w));
    std::cout << "threshold " << num(w.epsilon_threshold) << "\n"
              << "epsilon " << num(w.epsilon) << "\n"
              << "markov_lhs " << num(w.markov_lhs) << " markov_rhs " << num(w.markov_rhs) << "\n"
              << "contradiction " << (w.contradiction ? "true" : "false") << "\n";
    doc["spline_witness"] = Json{{"r", w.r},
                                 {"m", w.m},
                                 {"x_last", w.x_last},
                                 {"epsilon", w.epsilon},
                                 {"epsilon_threshold", w.epsilon_threshold},
                                 {"markov_lhs", w.markov_lhs},
                                 {"markov_rhs", w.markov_rhs},
                                 {"contradiction", w.contradiction != 0}};
  }
  if (a.poly_n) {
    cvx_polynomial_witness w;
    check(cvx_polynomial_witness_compute(a.r, *a.poly_n, &w));
    std::cout << "polynomial n " << w.n << " epsilon " << num(w.epsilon) << " lhs/rhs "
              << num(w.ratio) << " contradiction " << (w.contradiction ? "true" : "false")
              << "\n";
    doc["polynomial_witness"] = Json{{"r", w.r},
                                     {"n", w.n},
                                     {"epsilon", w.epsilon},
                                     {"markov_lhs", w.markov_lhs},
                                     {"markov_rhs", w.markov_rhs},
                                     {"ratio", w.ratio},
                                     {"contradiction", w.contradiction != 0}};
  }
  if (!a.growth.empty()) {
    std::vector<double> eps;
    for (const std::string& e : split(a.growth, ',')) eps.push_back(parse_double(e));
    std::vector<int> thresholds(eps.size());
    int nondecreasing = 0;
    const cvx_glue_config config = a.glue.config();
    check(cvx_threshold_growth(a.r, eps.data(), eps.size(), &config, thresholds.data(),
                               &nondecreasing));
    Json rows = Json::array();
    std::cout << "epsilon,N_threshold\n";
    for (std::size_t i = 0; i < eps.size(); ++i) {
      std::cout << num(eps[i]) << "," << thresholds[i] << "\n";
      rows.push_back(Json{{"epsilon", eps[i]}, {"N_threshold", thresholds[i]}});
    }
    std::cout << "nondecreasing " << (nondecreasing ? "true" : "false") << "\n";
    doc["threshold_growth"] = Json{{"r", a.r}, {"rows", std::move(rows)},
                                   {"nondecreasing", nondecreasing != 0}};
  }
  if (doc.empty()) {
    throw CLI::ValidationError("counterexample", "give --m, --poly-n or --growth");
  }
  if (!a.out.empty()) write_output(a.out, doc.dump(2) + "\n");
  return kExitOk;
}

// modulus

struct ModulusArgs {
  std::string function;
  int derivative = 0;
  int k = 2;
  double t = 0.0;
  std::string interval = "-1,1";
  int grid = 512;
  std::string out;
};

int cmd_modulus(const ModulusArgs& a) {
  const OraclePtr f = load_oracle(a.function);
  const std::vector<std::string> ends = split(a.interval, ',');
  if (ends.size() != 2) throw CLI::ValidationError("--interval", "expected a,b");
  const double lo = parse_double(ends[0]);
  const double hi = parse_double(ends[1]);
  cvx_modulus_result m;
  check(cvx_modulus(f.get(), a.derivative, a.k, a.t, lo, hi, a.grid, &m));
  std::cout << "value " << num(m.value) << "\n"
            << "arg_u " << num(m.arg_u) << " arg_x " << num(m.arg_x) << "\n"
            << "grid " << m.grid_density << "\n";
  if (!a.out.empty()) {
    const Json doc{{"function", a.function}, {"derivative", a.derivative}, {"k", a.k},
                   {"t", a.t},               {"a", lo},                    {"b", hi},
                   {"value", m.value},       {"arg_u", m.arg_u},           {"arg_x", m.arg_x},
                   {"grid_density", m.grid_density}};
    write_output(a.out, doc.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex spline approximation with interpolatory endpoint estimates"};
  app.require_subcommand(1);

  ApproximateArgs approx;
  auto* sub_approx = app.add_subcommand("approximate", "Build a convex spline");
  sub_approx->add_option("--function", approx.function, "Oracle, e.g. exp:alpha=1")->required();
  sub_approx->add_option("--r", approx.r, "Smoothness order")->required()->check(CLI::PositiveNumber);
  auto* n_opt = sub_approx->add_option("--n", approx.n, "Intervals of the Chebyshev partition");
  auto* part_opt =
      sub_approx->add_option("--partition", approx.partition, "Knot file, one knot per line");
  n_opt->excludes(part_opt);
  sub_approx->add_option("--out", approx.out, "Spline JSON path (default stdout)");
  approx.glue.add_to(sub_approx);

  CertifyArgs cert;
  auto* sub_cert = app.add_subcommand("certify", "Check a spline against the pointwise estimates");
  sub_cert->add_option("--function", cert.function)->required();
  sub_cert->add_option("--r", cert.r)->required()->check(CLI::NonNegativeNumber);
  sub_cert->add_option("--n", cert.n)->required();
  sub_cert->add_option("--spline", cert.spline, "Spline JSON written by approximate")
      ->required();
  sub_cert->add_option("--bound", cert.bounds, "Subset of 2.3 2.4 2.5 2.11 2.12 2.13")
      ->check(CLI::IsMember({"2.3", "2.4", "2.5", "2.11", "2.12", "2.13"}));
  sub_cert->add_option("--grid", cert.grid, "Evaluation points per report")
      ->check(CLI::Range(2, 1 << 24));
  sub_cert->add_option("--out", cert.out, "Report JSON path");

  SweepArgs sw;
  auto* sub_sweep = app.add_subcommand("sweep", "Sup-ratios over a range of n as CSV");
  sub_sweep->add_option("--function", sw.function)->required();
  sub_sweep->add_option("--r", sw.r)->required()->check(CLI::PositiveNumber);
  sub_sweep->add_option("--n", sw.n_range, "a:b:x2, a:b:+d or a list")->required();
  sub_sweep->add_option("--grid", sw.grid)->check(CLI::Range(2, 1 << 24));
  sub_sweep->add_option("--modulus-grid", sw.modulus_grid)->check(CLI::Range(64, 1 << 16));
  sub_sweep->add_option("--jobs", sw.jobs, "Worker threads (CONVEXLAB_JOBS overrides)")
      ->check(CLI::PositiveNumber);
  sub_sweep->add_flag("--timing", sw.timing, "Fill the wall_ms column");
  sub_sweep->add_option("--out", sw.out, "CSV path (default stdout)");
  sw.glue.add_to(sub_sweep);

  CounterexampleArgs cx;
  auto* sub_cx = app.add_subcommand("counterexample", "Markov-inequality witnesses");
  sub_cx->add_option("--r", cx.r)->required()->check(CLI::PositiveNumber);
  auto* m_opt = sub_cx->add_option("--m", cx.m, "Order of the spline on the last interval")
                    ->check(CLI::PositiveNumber);
  sub_cx->add_option("--x-last", cx.x_last, "Second to last knot")->needs(m_opt);
  sub_cx->add_option("--eps", cx.eps, "Truncation width (default: automatic)")->needs(m_opt);
  sub_cx->add_option("--poly-n", cx.poly_n, "Degree for the polynomial witness")
      ->check(CLI::PositiveNumber);
  sub_cx->add_option("--growth", cx.growth, "Descending eps list for N_threshold growth");
  sub_cx->add_option("--out", cx.out, "JSON path");
  cx.glue.add_to(sub_cx);

  ModulusArgs mod;
  auto* sub_mod = app.add_subcommand("modulus", "Modulus of smoothness by grid search");
  sub_mod->add_option("--function", mod.function)->required();
  sub_mod->add_option("--derivative", mod.derivative, "Apply to this derivative of f")
      ->check(CLI::NonNegativeNumber);
  sub_mod->add_option("--k", mod.k)->required()->check(CLI::Range(1, 8));
  sub_mod->add_option("--t", mod.t)->required()->check(CLI::NonNegativeNumber);
  sub_mod->add_option("--interval", mod.interval, "a,b");
  sub_mod->add_option("--grid", mod.grid)->check(CLI::Range(64, 1 << 16));
  sub_mod->add_option("--out", mod.out, "JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*sub_approx) {
      if (!approx.n && approx.partition.empty()) {
        std::cerr << "error: approximate needs --n or --partition\n";
        return kExitError;
      }
      return cmd_approximate(approx);
    }
    if (*sub_cert) return cmd_certify(cert);
    if (*sub_sweep) return cmd_sweep(sw);
    if (*sub_cx) return cmd_counterexample(cx);
    if (*sub_mod) return cmd_modulus(mod);
  } catch (const Failure& f) {
    return report_failure(f.status);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
