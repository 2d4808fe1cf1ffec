#include "convexlab/serialize.hpp"

#include <cmath>

#include "convexlab/endblocks.hpp"
#include "convexlab/error.hpp"

namespace convexlab {

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::kParse, "spline JSON: " + what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) schema_error("expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) schema_error(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

int integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) schema_error(std::string("field '") + key + "' is not an integer");
  return v.get<int>();
}

std::vector<double> numbers(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) schema_error(std::string("field '") + key + "' is not an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const Json& e : v) {
    if (!e.is_number()) schema_error(std::string("field '") + key + "' holds a non-number");
    out.push_back(e.get<double>());
  }
  return out;
}

// Non-finite values become null.
Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json sample_to_json(const BoundSample& s) {
  return Json{{"x", s.x},
              {"error", finite_or_null(s.error)},
              {"bound", finite_or_null(s.bound)},
              {"ratio", finite_or_null(s.ratio)}};
}

}  // namespace

Json poly_to_json(const Poly& p) {
  return Json{{"center", p.center()}, {"halfwidth", p.halfwidth()}, {"coeffs", p.coeffs()}};
}

Poly poly_from_json(const Json& j) {
  const double center = number(j, "center");
  const double halfwidth = number(j, "halfwidth");
  std::vector<double> coeffs = numbers(j, "coeffs");
  if (coeffs.empty()) schema_error("empty coefficient list");
  if (!(halfwidth > 0.0) || !std::isfinite(center)) schema_error("invalid frame");
  return Poly(center, halfwidth, std::move(coeffs));
}

Json trace_to_json(const GlueTrace& t) {
  return Json{{"M", t.M},
              {"x_star", t.x_star},
              {"H1", t.H1},
              {"H", t.H},
              {"delta", t.delta},
              {"delta_tilde", t.delta_tilde},
              {"delta_hat", t.delta_hat},
              {"gluing_case", t.gluing_case},
              {"lambda", t.lambda},
              {"c0_used", t.c0_used},
              {"affine", t.affine}};
}

GlueTrace trace_from_json(const Json& j) {
  GlueTrace t;
  t.M = number(j, "M");
  t.x_star = number(j, "x_star");
  t.H1 = number(j, "H1");
  t.H = number(j, "H");
  t.delta = number(j, "delta");
  t.delta_tilde = number(j, "delta_tilde");
  t.delta_hat = number(j, "delta_hat");
  t.gluing_case = integer(j, "gluing_case");
  t.lambda = number(j, "lambda");
  t.c0_used = number(j, "c0_used");
  const Json& affine = field(j, "affine");
  if (!affine.is_boolean()) schema_error("field 'affine' is not a boolean");
  t.affine = affine.get<bool>();
  return t;
}

Json spline_to_json(const PiecewisePoly& s, const GlueTrace* trace, const SplineMeta* meta) {
  Json pieces = Json::array();
  for (const Poly& p : s.pieces()) pieces.push_back(poly_to_json(p));
  Json j{{"knots", s.knots().knots()},
         {"order", s.order()},
         {"pieces", std::move(pieces)},
         {"convex_certified", s.convex_certified()}};
  if (trace) j["trace"] = trace_to_json(*trace);
  if (meta) {
    j["meta"] = Json{{"function", meta->function},
                     {"r", meta->r},
                     {"n", meta->n},
                     {"N_threshold", meta->n_threshold},
                     {"reproduction", meta->reproduction},
                     {"max_grid_error", meta->max_grid_error},
                     {"H_ladder_factor", kThresholdLadderFactor}};
  }
  return j;
}

SplineDocument spline_from_json(const Json& j) {
  std::vector<double> knots = numbers(j, "knots");
  const int order = integer(j, "order");
  const Json& pieces_json = field(j, "pieces");
  if (!pieces_json.is_array()) schema_error("field 'pieces' is not an array");
  std::vector<Poly> pieces;
  for (const Json& p : pieces_json) pieces.push_back(poly_from_json(p));
  const Json& certified = field(j, "convex_certified");
  if (!certified.is_boolean()) schema_error("field 'convex_certified' is not a boolean");

  std::optional<PiecewisePoly> spline;
  try {
    spline.emplace(Partition(std::move(knots)), std::move(pieces), order);
  } catch (const Error& e) {
    schema_error(e.what());
  }
  spline->set_convex_certified(certified.get<bool>());

  SplineDocument doc{std::move(*spline), std::nullopt, std::nullopt};
  if (j.contains("trace")) doc.trace = trace_from_json(j.at("trace"));
  if (j.contains("meta")) {
    const Json& m = j.at("meta");
    SplineMeta meta;
    const Json& fn = field(m, "function");
    if (!fn.is_string()) schema_error("field 'function' is not a string");
    meta.function = fn.get<std::string>();
    meta.r = integer(m, "r");
    meta.n = integer(m, "n");
    meta.n_threshold = integer(m, "N_threshold");
    const Json& rep = field(m, "reproduction");
    if (!rep.is_boolean()) schema_error("field 'reproduction' is not a boolean");
    meta.reproduction = rep.get<bool>();
    meta.max_grid_error = number(m, "max_grid_error");
    doc.meta = meta;
  }
  return doc;
}

Json bound_report_to_json(const BoundReport& report) {
  Json grid = Json::array();
  for (const BoundSample& s : report.grid) grid.push_back(sample_to_json(s));
  Json excluded = Json::array();
  for (const BoundSample& s : report.excluded_points) excluded.push_back(sample_to_json(s));
  return Json{{"id", bound_id_name(report.id)},
              {"sup_ratio", finite_or_null(report.sup_ratio)},
              {"sup_x", report.sup_x},
              {"atol", report.atol},
              {"excluded_ok", report.excluded_ok},
              {"excluded_points", std::move(excluded)},
              {"grid", std::move(grid)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace convexlab
