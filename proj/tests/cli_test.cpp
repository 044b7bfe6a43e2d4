#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "woldlab/catalog.hpp"
#include "woldlab/cli.hpp"
#include "woldlab/report.hpp"

using namespace woldlab;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("woldlab_cli_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

RunResult run_with(std::string command, std::vector<std::string> inputs, OutputFormat format = OutputFormat::json) {
  RunConfig c;
  c.command = std::move(command);
  c.inputs = std::move(inputs);
  c.format = format;
  return run(c);
}

}  // namespace

TEST_CASE("wold on the fixed point example") {
  const RunResult r = run_with("wold", {"catalog:fixed_plus_shift"});
  REQUIRE(r.exit_code == kExitDecided);
  const Json j = Json::parse(r.report);
  CHECK(j["verdict"] == "true");
  CHECK(j["exact"] == true);
  REQUIRE(j["unitary_basis"].size() == 1);
  CHECK(j["unitary_basis"][0][0]["lane"] == 0);
  CHECK(j["shift_wandering_basis"][0][0]["lane"] == 1);
  CHECK(j["bases"].size() == 2);
}

TEST_CASE("exit codes") {
  CHECK(run_with("wold", {"catalog:grid_horizontal"}).exit_code == kExitUndecided);
  CHECK(run_with("wold", {"catalog:nope"}).exit_code == kExitInvalid);
  CHECK(run_with("wold", {"catalog:kerchy"}).exit_code == kExitInvalid);
  CHECK(run_with("frobnicate", {}).exit_code == kExitInvalid);
  CHECK(run_with("pair", {"catalog:shift"}).exit_code == kExitInvalid);
  CHECK(run_with("spectral", {"catalog:kerchy"}).exit_code == kExitDecided);
  CHECK(run_with("spectral", {"catalog:final"}).exit_code == kExitDecided);
  CHECK(run_with("catalog", {}).exit_code == kExitDecided);

  RunConfig c;
  c.command = "wander";
  c.inputs = {"catalog:fixed_plus_shift"};
  c.vector = "0:0=1,1:0=1";
  const RunResult w = run(c);
  CHECK(w.exit_code == kExitDecided);
  CHECK(Json::parse(w.report)["verdict"] == "false");
  c.vector = "7:0=1";
  CHECK(run(c).exit_code == kExitInvalid);
  c.vector = "1:0=1";
  c.depth = 0;
  CHECK(run(c).exit_code == kExitInvalid);
}

TEST_CASE("operator files") {
  const std::string good = temp_file("good.op",
                                     "woldlab-operator 1\n"
                                     "name V\n"
                                     "lane 0 finite 1 f\n"
                                     "lane 1 naturals e\n"
                                     "column 0:0  0:0 1 0\n"
                                     "tail 1 0 1 1 0\n");
  const RunResult r = run_with("wold", {good});
  CHECK(r.exit_code == kExitDecided);
  CHECK(r.report == run_with("wold", {"catalog:fixed_plus_shift"}).report);

  const std::string bad = temp_file("bad.op", "woldlab-operator 1\nlane 0 naturals\ntail 0 0 0 1 q\n");
  const RunResult e = run_with("wold", {bad});
  CHECK(e.exit_code == kExitInvalid);
  CHECK(e.error == "line 3, tail phase: expected a number, got 'q'");

  const std::string skew = temp_file("skew.op",
                                     "woldlab-operator 1\nlane 0 finite 2\n"
                                     "column 0:0 0:0 1 0\ncolumn 0:1 0:0 0.6 0 0:1 0.8 0\n");
  const RunResult m = run_with("wold", {skew});
  CHECK(m.exit_code == kExitInvalid);
  CHECK(m.error.find("not orthogonal") != std::string::npos);

  CHECK(run_with("wold", {"/nonexistent/op"}).exit_code == kExitInvalid);
}

TEST_CASE("spectral files") {
  const std::string kerchy = temp_file("kerchy.json",
                                       R"({"arcs": [{"start": 0, "length": "3/5"}, {"start": 0, "length": 1},)"
                                       R"( {"start": 0, "length": "3/5"}]})");
  const RunResult r = run_with("spectral", {kerchy});
  REQUIRE(r.exit_code == kExitDecided);
  const Json j = Json::parse(r.report);
  CHECK(j["profile"]["values"] == Json::array({3, 1}));
  CHECK(j["bilateral_shift"] == false);
  CHECK(j["bilateral_shift_reason"] == "non-constant multiplicity");
  CHECK(j["cover"]["layer_count"] == 3);

  const std::string broken = temp_file("broken.json", "{\"arcs\": [");
  CHECK(run_with("spectral", {broken}).exit_code == kExitInvalid);
  const std::string missing = temp_file("missing.json", R"({"arcs": [{"start": 0}]})");
  const RunResult m = run_with("spectral", {missing});
  CHECK(m.exit_code == kExitInvalid);
  CHECK(m.error == "spectral description: missing field 'length'");
}

TEST_CASE("catalog export round-trips through the operator format") {
  for (const auto& e : fixtures()) {
    if (!std::holds_alternative<StructuredIsometry>(e.build())) continue;
    const RunResult exported = run_with("catalog", {"catalog:" + e.name}, OutputFormat::text);
    REQUIRE(exported.exit_code == kExitDecided);
    const std::string path = temp_file(e.name + ".op", exported.report);
    CAPTURE(e.name);
    const RunResult a = run_with("wold", {path});
    const RunResult b = run_with("wold", {"catalog:" + e.name});
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.report == b.report);
  }
}

TEST_CASE("reports are deterministic") {
  const std::vector<std::pair<std::string, std::string>> runs{
      {"wold", "catalog:bilateral_plus_shift"}, {"wander", "catalog:cycle2_plus_shift"},
      {"pair", "catalog:s2_s3"},                {"pair", "catalog:fixed_plus_shift_pair"},
      {"spectral", "catalog:kerchy"},           {"spectral", "catalog:final"},
      {"catalog", "catalog:grid"}};
  for (const auto& [command, input] : runs) {
    for (OutputFormat f : {OutputFormat::json, OutputFormat::text}) {
      const RunResult a = run_with(command, {input}, f);
      const RunResult b = run_with(command, {input}, f);
      CAPTURE(command);
      CAPTURE(input);
      CHECK(a.exit_code == b.exit_code);
      CHECK(!a.report.empty());
      CHECK(a.report == b.report);
    }
  }
}

TEST_CASE("text output flattens the report") {
  const RunResult r = run_with("wold", {"catalog:fixed_plus_shift"}, OutputFormat::text);
  CHECK(r.report.find("verdict: true\n") != std::string::npos);
  CHECK(r.report.find("unitary_basis[0]: 0:0=1\n") != std::string::npos);
}
