#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "convexlab_cli_test";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path tmp(const std::string& name) { return workdir() / name; }

Run cli(const std::string& args) {
  const fs::path out = tmp("stdout.txt");
  const fs::path err = tmp("stderr.txt");
  const std::string cmd = std::string("\"") + CONVEXLAB_CLI + "\" " + args + " > \"" + out.string() +
                          "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("approximate writes a spline document") {
  const fs::path out = tmp("exp16.json");
  const Run r = cli("approximate --function exp:alpha=1 --r 1 --n 16 --out " + out.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "N_threshold 10"));
  CHECK(contains(r.out, "convex certified"));
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j.at("knots").size() == 17);
  CHECK(j.at("pieces").size() == 16);
  CHECK(j.at("convex_certified") == true);
  CHECK(j.at("meta").at("function") == "exp:alpha=1");
  CHECK(j.at("meta").at("n") == 16);
  CHECK(j.at("meta").at("N_threshold") == 10);
  CHECK(j.at("trace").contains("lambda"));
}

TEST_CASE("approximate reproduces x^4 for r = 3") {
  const fs::path out = tmp("quartic.json");
  const Run r = cli("approximate --function pow:m=2 --r 3 --n 32 --out " + out.string());
  CHECK(r.code == 0);
  CHECK(contains(r.out, "reproduction true"));
}

TEST_CASE("thresholds and coarse partitions exit with 2") {
  const Run below = cli("approximate --function truncpow:r=1,eps=1e-6 --r 1 --n 8 --out " +
                        tmp("never.json").string());
  CHECK(below.code == 2);
  CHECK(contains(below.out + below.err, "N_threshold 12001"));
  CHECK_FALSE(fs::exists(tmp("never.json")));

  const fs::path part = tmp("coarse.txt");
  std::ofstream(part) << "-1\n0\n0.5\n1\n";
  const Run coarse = cli("approximate --function exp:alpha=1 --r 1 --partition " + part.string() +
                         " --out " + tmp("coarse.json").string());
  CHECK(coarse.code == 2);
  CHECK(contains(coarse.out + coarse.err, "admissible_H"));
}

TEST_CASE("certify checks a stored spline") {
  const fs::path spline = tmp("exp16c.json");
  REQUIRE(cli("approximate --function exp:alpha=1 --r 1 --n 16 --out " + spline.string()).code == 0);
  const fs::path report = tmp("report.json");
  const Run ok = cli("certify --function exp:alpha=1 --r 1 --n 16 --spline " + spline.string() +
                     " --bound 2.3 --bound 2.5 --grid 129 --out " + report.string());
  CHECK(ok.code == 0);
  CHECK(contains(ok.out, "2.3 sup_ratio"));
  CHECK(contains(ok.out, "2.5 sup_ratio"));
  CHECK_FALSE(contains(ok.out, "2.4 sup_ratio"));
  const auto j = nlohmann::json::parse(slurp(report));
  CHECK(j.dump().find("\"2.3\"") != std::string::npos);

  const Run wrong_n = cli("certify --function exp:alpha=1 --r 1 --n 32 --spline " + spline.string());
  CHECK(wrong_n.code == 1);
  CHECK(contains(wrong_n.err, "MismatchedInputs"));
  const Run wrong_f = cli("certify --function cosh:beta=1 --r 1 --n 16 --spline " + spline.string());
  CHECK(wrong_f.code == 1);

  const fs::path junk = tmp("junk.json");
  std::ofstream(junk) << "{\"knots\": [0, 1]}";
  const Run bad = cli("certify --function exp:alpha=1 --r 1 --n 16 --spline " + junk.string());
  CHECK(bad.code == 1);
  CHECK(contains(bad.err, "schema"));
}

TEST_CASE("sweep CSV is deterministic across job counts") {
  const std::string base = "sweep --function exp:alpha=1 --r 1 --n 8,16,32 --grid 65 --modulus-grid 256 ";
  const fs::path a = tmp("a.csv");
  const fs::path b = tmp("b.csv");
  REQUIRE(cli(base + "--jobs 1 --out " + a.string()).code == 0);
  REQUIRE(cli(base + "--jobs 3 --out " + b.string()).code == 0);
  const std::string csv = slurp(a);
  CHECK(csv == slurp(b));
  CHECK(csv.rfind("n,N_threshold,sup_ratio_2_3,", 0) == 0);
  CHECK(contains(csv, "\n8,10,NA,NA,NA,NA,NA,NA,NA\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  const Run range = cli("sweep --function exp:alpha=1 --r 1 --n 16:64:x2 --grid 33 --modulus-grid 128");
  CHECK(range.code == 0);
  CHECK(contains(range.out, "\n16,"));
  CHECK(contains(range.out, "\n32,"));
  CHECK(contains(range.out, "\n64,"));
}

TEST_CASE("counterexample and modulus") {
  const Run w = cli("counterexample --r 1 --m 3 --x-last 0.9 --eps 0.01");
  CHECK(w.code == 0);
  CHECK(contains(w.out, "markov_lhs 0.02"));
  CHECK(contains(w.out, "contradiction true"));
  const Run none = cli("counterexample --r 1 --m 3 --x-last 0.9 --eps 0.03");
  CHECK(contains(none.out, "contradiction false"));

  const Run m = cli("modulus --function exp:alpha=1 --derivative 0 --k 2 --t 0.5 --interval -1,1");
  CHECK(m.code == 0);
  CHECK(contains(m.out, "value 0.42083"));
}

TEST_CASE("usage errors") {
  CHECK(cli("approximate --r 1 --n 8").code == 1);
  CHECK(cli("approximate --function nosuch --r 1 --n 8").code == 1);
  CHECK(cli("approximate --function exp:alpha=1 --r 1 --n 8 --partition x.txt").code != 0);
  CHECK(cli("frobnicate").code != 0);
}
