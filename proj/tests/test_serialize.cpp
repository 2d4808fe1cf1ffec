#include "doctest.h"

#include <cmath>

#include "convexlab/error.hpp"
#include "convexlab/glue.hpp"
#include "convexlab/serialize.hpp"

using namespace convexlab;

namespace {

void expect_parse_error(const Json& j) {
  try {
    spline_from_json(j);
    FAIL("expected a schema error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
}

}  // namespace

TEST_CASE("spline round trip is exact") {
  const ChebyshevResult res = construct_chebyshev(oracles::exponential(1.0), 2, 16);
  const SplineMeta meta{"exp:alpha=1", 2, 16, res.n_threshold, false, 1.5e-7};
  const Json j = spline_to_json(res.spline, &res.trace, &meta);
  const std::string text = dump(j);
  const SplineDocument doc = spline_from_json(Json::parse(text));

  CHECK(doc.spline.order() == res.spline.order());
  CHECK(doc.spline.convex_certified() == res.spline.convex_certified());
  REQUIRE(doc.spline.pieces().size() == res.spline.pieces().size());
  for (std::size_t i = 0; i < res.spline.pieces().size(); ++i) {
    CHECK(doc.spline.pieces()[i].coeffs() == res.spline.pieces()[i].coeffs());
    CHECK(doc.spline.pieces()[i].center() == res.spline.pieces()[i].center());
    CHECK(doc.spline.pieces()[i].halfwidth() == res.spline.pieces()[i].halfwidth());
  }
  CHECK(doc.spline.knots().knots() == res.spline.knots().knots());
  REQUIRE(doc.trace.has_value());
  CHECK(doc.trace->lambda == res.trace.lambda);
  CHECK(doc.trace->gluing_case == res.trace.gluing_case);
  REQUIRE(doc.meta.has_value());
  CHECK(doc.meta->function == "exp:alpha=1");
  CHECK(doc.meta->n_threshold == res.n_threshold);
  CHECK(doc.meta->max_grid_error == 1.5e-7);
  CHECK(j.at("meta").at("H_ladder_factor") == 2.0);

  // Serializing again gives the same bytes.
  CHECK(dump(spline_to_json(doc.spline, &*doc.trace, &*doc.meta)) == text);
}

TEST_CASE("field order and minimal documents") {
  const PiecewisePoly s = polygonal_baseline(oracles::exponential(1.0), 4);
  const Json j = spline_to_json(s);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"knots", "order", "pieces", "convex_certified"});
  const SplineDocument doc = spline_from_json(j);
  CHECK_FALSE(doc.trace.has_value());
  CHECK_FALSE(doc.meta.has_value());
  CHECK(doc.spline(0.3) == s(0.3));
}

TEST_CASE("schema violations") {
  const Json good = spline_to_json(polygonal_baseline(oracles::exponential(1.0), 4));
  expect_parse_error(Json::array());
  for (const char* key : {"knots", "order", "pieces", "convex_certified"}) {
    Json j = good;
    j.erase(key);
    CAPTURE(key);
    expect_parse_error(j);
  }
  Json wrong_type = good;
  wrong_type["order"] = "two";
  expect_parse_error(wrong_type);

  Json bad_knots = good;
  bad_knots["knots"] = Json::array({0.0, -1.0, 1.0, 2.0, 3.0});
  expect_parse_error(bad_knots);

  Json short_pieces = good;
  short_pieces["pieces"].erase(0);
  expect_parse_error(short_pieces);

  Json bad_frame = good;
  bad_frame["pieces"][0]["halfwidth"] = -1.0;
  expect_parse_error(bad_frame);

  Json empty_coeffs = good;
  empty_coeffs["pieces"][1]["coeffs"] = Json::array();
  expect_parse_error(empty_coeffs);

  Json bad_meta = good;
  bad_meta["meta"] = Json{{"function", 3}};
  expect_parse_error(bad_meta);
}

TEST_CASE("bound reports write non-finite values as null") {
  BoundReport rep;
  rep.id = BoundId::kStripFirst;
  rep.sup_ratio = INFINITY;
  rep.grid.push_back({0.5, 1e-3, 0.0, INFINITY});
  const Json j = bound_report_to_json(rep);
  CHECK(j.at("id") == "2.5");
  CHECK(j.at("sup_ratio").is_null());
  CHECK(j.at("grid")[0].at("ratio").is_null());
  CHECK(j.at("grid")[0].at("bound") == 0.0);
  CHECK(dump(j).back() == '\n');
}
