#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "convexlab/certify.hpp"
#include "convexlab/glue.hpp"
#include "convexlab/piecewise.hpp"
#include "convexlab/poly.hpp"

namespace convexlab {

using Json = nlohmann::ordered_json;

/// Provenance written next to a spline so that `certify` can match it
/// against the function, r and n it is asked about.
struct SplineMeta {
  std::string function;
  int r = 0;
  int n = 0;
  int n_threshold = 0;
  bool reproduction = false;
  double max_grid_error = 0.0;
};

Json poly_to_json(const Poly& p);
Poly poly_from_json(const Json& j);

Json trace_to_json(const GlueTrace& t);
GlueTrace trace_from_json(const Json& j);

struct SplineDocument {
  PiecewisePoly spline;
  std::optional<GlueTrace> trace;
  std::optional<SplineMeta> meta;
};

Json spline_to_json(const PiecewisePoly& s, const GlueTrace* trace = nullptr,
                    const SplineMeta* meta = nullptr);
/// Throws kParse on any schema violation.
SplineDocument spline_from_json(const Json& j);

Json bound_report_to_json(const BoundReport& report);

/// Fixed formatting: two-space indent, shortest round-trip doubles.
std::string dump(const Json& j);

}  // namespace convexlab
