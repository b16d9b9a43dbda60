#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "splitcubic/certificate.hpp"
#include "splitcubic/forms.hpp"

using namespace splitcubic;
using nlohmann::json;

namespace {

const std::string kData = SPLITCUBIC_TEST_DATA;

struct Run {
  int status;
  std::string out, err;
  json doc() const { return json::parse(out); }
  json error() const { return json::parse(err); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int s = cli::run(args, out, err);
  return {s, out.str(), err.str()};
}

std::string data(const char* name) { return kData + "/" + name; }

}  // namespace

TEST_CASE("data forms match the built-in constructions") {
  CHECK(load_form(data("mordell.json")) == make_mordell_form());
  NumberFieldSpec spec{BigInt(-2), BigInt(0), BigInt(0)};
  CHECK(load_form(data("norm_cuberoot2.json")) == make_norm_form(spec));
}

TEST_CASE("exponent subcommands") {
  auto r = run({"params", "--n", "9", "--t", "1", "--lambda", "8"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["params"]["xi"] == "25/31");
  CHECK(r.doc()["manifest"]["parameters"]["t"] == "1");

  r = run({"params", "--n", "4", "--t", "1", "--lambda", "8"});
  CHECK(r.status == 2);
  CHECK(r.error()["error"]["kind"] == "precondition");

  // decimals are refused on the symbolic path; missing flags are usage errors
  CHECK(run({"params", "--n", "9", "--t", "0.5", "--lambda", "8"}).status == 2);
  CHECK(run({"params", "--n", "9", "--t", "1"}).status == 2);
  CHECK(run({"params", "--n", "9", "--t", "1", "--lambda", "8", "--bogus", "1"}).status == 2);
  CHECK(run({"frobnicate"}).status == 2);

  r = run({"check", "--n", "9", "--v", "2", "--t", "1", "--lambda", "8"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["part_i"] == true);

  r = run({"bound-lemma7", "--n", "10", "--v", "1", "--t", "21/40", "--arc", "11/20,0,1/2"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["bound"]["r"] == "127/16");

  r = run({"bound-lemma7", "--remark14", "--n", "9", "--v", "2", "--t", "1/2", "--arc", "1145/1922,1/5,458/775"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["bound"]["mD"] == "-1/8");

  r = run({"optimize-lemma9", "--region", "a<=25/31,b>=a/5+11/5"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["exponent"]["r"] == "539/310");
  CHECK(run({"optimize-lemma9", "--region", "b>=a"}).status == 2);
}

TEST_CASE("certify and verify round trip through a file") {
  const auto path = (std::filesystem::temp_directory_path() / "splitcubic_cert_test.json").string();
  auto r = run({"certify", "--case", "119", "--out", path});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["verdict"] == true);
  auto v = run({"certify", "--verify", path});
  CHECK(v.status == 0);
  CHECK(v.doc()["verified"] == true);
  CHECK(v.doc()["manifest"]["input_digests"].contains(path));

  json doc;
  std::ifstream(path) >> doc;
  doc["steps"][4]["output"]["r"] = "1/2";
  std::ofstream(path) << doc.dump();
  v = run({"certify", "--verify", path});
  CHECK(v.status == 2);
  CHECK(v.doc()["verified"] == false);
  CHECK(v.doc()["failing_step"] == 5);
  std::filesystem::remove(path);

  CHECK(run({"certify", "--case", "42"}).status == 2);
}

TEST_CASE("numeric subcommands") {
  auto r = run({"sum", "--form", data("one_cube.json"), "--alpha", "1/2", "--P", "10", "--rho", "1", "--center", "0"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["S"]["re"] == -1.0);
  CHECK(r.doc()["manifest"]["input_digests"].size() == 1);

  r = run({"complete-sum", "--form", data("one_cube.json"), "--a", "1", "--q", "3"});
  REQUIRE(r.status == 0);
  CHECK(std::abs(r.doc()["S"]["re"].get<double>()) < 1e-14);

  r = run({"sing-series", "--form", data("three_cubes.json"), "--qmax", "1"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["value"] == 1.0);

  r = run({"sing-integral", "--form", data("two_cubes.json"), "--center", data("center_two_cubes.json"), "--rho",
           "1/8", "--bmax", "50", "--seed", "3", "--samples", "200000"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["value"].get<double>() == doctest::Approx(16.0 / 45).epsilon(0.01));
  CHECK(r.doc()["monte_carlo"]["seed"] == 3);
  // the Monte Carlo cross-check needs a seed
  CHECK(run({"sing-integral", "--form", data("two_cubes.json"), "--center", "0.5,-0.5", "--rho", "1/8", "--bmax",
             "50"}).status == 2);
  CHECK(run({"sing-integral", "--form", data("two_cubes.json"), "--center", "0", "--rho", "1/8", "--bmax", "50",
             "--seed", "1"}).status == 2);

  r = run({"moment", "--coeff", "1", "--k", "4", "--P", "12"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["count"] == "284");
  CHECK(run({"moment", "--coeff", "1", "--k", "3", "--P", "12"}).status == 2);

  r = run({"classify", "--alpha", "0.4142135", "--P", "100", "--Delta", "1/10"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["major"] == false);
  r = run({"classify", "--alpha", "1/2", "--P", "100", "--Delta", "1/5"});
  CHECK(r.doc()["point"]["q"] == 2);
}

TEST_CASE("local, count and search subcommands") {
  auto r = run({"local", "--form", data("n1.json"), "--p", "7"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["count"] == 1);
  CHECK(r.doc()["witness"].is_null());

  r = run({"local", "--form", data("mordell.json"), "--p", "7", "--certify-insoluble", "--blocks", "1,2,3/4,5,6/7,8,9"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["certified"] == true);

  r = run({"count", "--form", data("three_cubes.json"), "--P", "3", "--rho", "1", "--center", "0"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["count"] == "13");
  CHECK(r.doc()["method"] == "meet-in-middle");

  r = run({"count", "--form", data("three_cubes.json"), "--P", "300", "--rho", "1", "--center", "0", "--method",
           "direct", "--budget", "1000"});
  CHECK(r.status == 3);
  CHECK(r.error()["error"]["kind"] == "budget");

  r = run({"search", "--form", data("two_cubes.json"), "--height", "3"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["point"] == json::array({1, -1}));
  r = run({"search", "--form", data("norm_cuberoot2.json"), "--height", "10"});
  REQUIRE(r.status == 0);
  CHECK(r.doc()["status"] == "none_exists_up_to_height");
  r = run({"search", "--form", data("norm_cuberoot2.json"), "--height", "50", "--budget", "500"});
  CHECK(r.status == 3);
  CHECK(r.doc()["status"] == "budget_exhausted");

  CHECK(run({"count", "--P", "3", "--rho", "1", "--center", "0"}).status == 2);
}

TEST_CASE("selftest passes") {
  const auto r = run({"selftest"});
  CHECK(r.status == 0);
  CHECK(r.doc()["passed"] == true);
  CHECK(r.doc()["checks"].size() >= 15);
}
