#include "doctest.h"
#include "support.hpp"

#include "bisurf/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>

using namespace bisurf;
using namespace bisurf::testing;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(BISURF_TEST_DATA) + "/" + name; }

CommandOptions options(const std::string& command, const std::string& input) {
  CommandOptions o;
  o.command = command;
  o.input = data(input);
  return o;
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + std::string(BISURF_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string without_timings(const std::string& text) {
  json j = json::parse(text);
  j.erase("timings");
  return j.dump(2);
}

}  // namespace

TEST_CASE("parse_job") {
  JobSpec j = parse_job(json::parse(R"({"m": 1, "n": 1, "a": ["s*t", "s*v", "u*t", "u*v"], "seed": 4})"));
  CHECK(j.m == 1);
  CHECK(j.a[3] == "u*v");
  CHECK(j.seed == 4u);
  CHECK(j.assert_one_to_one);
  CHECK(to_parametrization(j) == segre());

  CHECK_THROWS_AS(parse_job(json::parse(R"({"m": 1, "n": 1, "a": ["s*t", "s*v", "u*t"]})")), InputError);
  CHECK_THROWS_AS(parse_job(json::parse(R"({"m": 0, "n": 1, "a": ["t", "v", "t", "v"]})")), InputError);
  CHECK_THROWS_AS(parse_job(json::parse(R"({"n": 1, "a": ["t", "v", "t", "v"]})")), InputError);
  CHECK_THROWS_AS(read_job(data("does_not_exist.json")), InputError);

  JobSpec wrong_degree = parse_job(json::parse(R"({"m": 2, "n": 1, "a": ["s*t", "s*v", "u*t", "u*v"]})"));
  CHECK_THROWS_AS(to_parametrization(wrong_degree), InputError);
  try {
    to_parametrization(read_job(data("malformed.json")));
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("position 6") != std::string::npos);
  }
}

TEST_CASE("check reports") {
  int code = -1;
  json rep = build_report(options("check", "worked_example.json"), code);
  CHECK(code == kExitOk);
  CHECK(rep["schema"] == kReportSchema);
  CHECK(rep["conditions"]["k"] == 1);
  CHECK(rep["conditions"]["route"] == "moving_quadrics");
  for (int i = 1; i <= 6; ++i) CHECK(rep["conditions"]["verdicts"]["B" + std::to_string(i)]["pass"] == true);

  json seg = build_report(options("check", "segre.json"), code);
  CHECK(code == kExitOk);
  CHECK(seg["conditions"]["k"] == 0);
  CHECK(seg["conditions"]["route"] == "cox");

  json curve = build_report(options("check", "curve_component.json"), code);
  CHECK(code == kExitFailure);
  CHECK(curve["conditions"]["passed"] == false);
  CHECK(curve["conditions"]["failure"].get<std::string>().rfind("B2", 0) == 0);
}

TEST_CASE("implicitize report and polynomial round trip") {
  int code = -1;
  json rep = build_report(options("implicitize", "worked_example.json"), code);
  CHECK(code == kExitOk);
  const json& imp = rep["implicit"];
  CHECK(imp["degree"] == 7);
  CHECK(imp["k"] == 1);
  CHECK(imp["verification"]["passed"] == true);
  XPoly back = parse_x(imp["polynomial"].get<std::string>());
  CHECK(back == normalize(back));
  CHECK(back == read_golden("worked_example_oracle.txt"));

  json seg = build_report(options("implicitize", "segre.json"), code);
  CHECK(seg["implicit"]["polynomial"] == "x0*x3 - x1*x2");

  CommandOptions both = options("implicitize", "worked_example.json");
  both.det_backend = "both";
  json b = build_report(both, code);
  CHECK(code == kExitOk);
  CHECK(b["implicit"]["backends_agree"] == true);
  CHECK(b["implicit"]["polynomial"] == imp["polynomial"]);
}

TEST_CASE("verify and hilbert commands") {
  int code = -1;
  CommandOptions v = options("verify", "segre.json");
  v.equation = "2*x0*x3 - 2*x1*x2";
  json ok = build_report(v, code);
  CHECK(code == kExitOk);
  CHECK(ok["polynomial"] == "x0*x3 - x1*x2");

  v.equation = "x0*x3 + x1*x2";
  json bad = build_report(v, code);
  CHECK(code == kExitFailure);
  CHECK_FALSE(bad["verification"]["failing_point"].is_null());

  v.equation = "x0*x3 +";
  CHECK_THROWS_AS(build_report(v, code), InputError);

  CommandOptions h = options("hilbert", "regularity.json");
  h.from = BiDegree{3, 5};
  h.to = BiDegree{3, 5};
  json reg = build_report(h, code);
  CHECK(code == kExitOk);
  REQUIRE(reg["hilbert"]["table"].size() == 1);
  CHECK(reg["hilbert"]["table"][0]["dim"] == 2);

  CommandOptions p = options("hilbert", "worked_example.json");
  p.from = BiDegree{3, 3};
  p.to = BiDegree{3, 3};
  CHECK(build_report(p, code)["hilbert"]["table"][0]["dim"] == 1);
  p.power = 2;
  p.from = BiDegree{5, 5};
  p.to = BiDegree{5, 5};
  CHECK(build_report(p, code)["hilbert"]["table"][0]["dim"] == 3);
  p.power = 3;
  CHECK_THROWS_AS(build_report(p, code), InputError);
}

TEST_CASE("exit codes of the executable") {
  CHECK(run_cli("check --input " + data("worked_example.json")).code == 0);
  CHECK(run_cli("check --input " + data("segre.json")).code == 0);
  CHECK(run_cli("check --input " + data("curve_component.json")).code == 1);
  CHECK(run_cli("implicitize --input " + data("curve_component.json")).code == 1);
  CHECK(run_cli("check --input " + data("malformed.json")).code == 2);
  CHECK(run_cli("check --input " + data("missing.json")).code == 2);
  CHECK(run_cli("implicitize --input " + data("segre.json") + " --det-backend lu").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("hilbert --input " + data("segre.json") + " --from 3").code == 2);

  Run seg = run_cli("implicitize --input " + data("segre.json"));
  CHECK(seg.code == 0);
  CHECK(seg.out.find("\nx0*x3 - x1*x2\n") != std::string::npos);
}

TEST_CASE("environment overrides and output file") {
  Run a = run_cli("implicitize --json", "BISURF_INPUT=" + data("segre.json") + " BISURF_SEED=5");
  REQUIRE(a.code == 0);
  json j = json::parse(a.out);
  CHECK(j["seed"] == 5);

  std::string path = "bisurf_cli_test_output.json";
  std::remove(path.c_str());
  Run b = run_cli("check --json --input " + data("segre.json") + " --output " + path);
  CHECK(b.code == 0);
  CHECK(b.out.empty());
  CHECK(json::parse(read_text(path))["conditions"]["route"] == "cox");
  std::remove(path.c_str());
}

TEST_CASE("JSON reports are deterministic apart from timings") {
  for (const char* file : {"worked_example.json", "segre.json", "regularity.json"}) {
    std::string args = std::string("implicitize --json --seed 3 --input ") + data(file);
    Run a = run_cli(args), b = run_cli(args);
    CHECK(a.code == b.code);
    CHECK(without_timings(a.out) == without_timings(b.out));
    CHECK(json::parse(a.out).contains("timings"));
  }
}
