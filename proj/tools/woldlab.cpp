#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "woldlab/cli.hpp"

int main(int argc, char** argv) {
  woldlab::RunConfig config;
  std::string format = "json";
  std::string output;

  CLI::App app{"woldlab - Wold decompositions, wandering vectors and commuting isometries"};
  app.add_option("command", config.command, "wold | wander | pair | spectral | catalog")
      ->required()
      ->check(CLI::IsMember({"wold", "wander", "pair", "spectral", "catalog"}));
  app.add_option("--input", config.inputs, "operator file, spectral JSON file, or catalog:<name> (repeat for pairs)");
  app.add_option("--depth", config.depth, "orbit depth and window size")->check(CLI::PositiveNumber);
  app.add_option("--horizon", config.horizon, "horizon for wandering checks")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "json | text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--output", output, "write the report here instead of standard output");
  app.add_option("--vector", config.vector, "vector for wander, e.g. \"0:0=1,1:2=0.5-0.5i\"");
  app.add_flag("--strong", config.strong, "check strong wandering (two-sided orbit)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : woldlab::kExitInvalid;
  }
  config.format = format == "text" ? woldlab::OutputFormat::text : woldlab::OutputFormat::json;

  const woldlab::RunResult result = woldlab::run(config);
  if (result.exit_code == woldlab::kExitInvalid) {
    std::cerr << "woldlab: " << result.error << "\n";
    return result.exit_code;
  }
  if (output.empty()) {
    std::cout << result.report;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "woldlab: cannot write '" << output << "'\n";
      return woldlab::kExitInvalid;
    }
    out << result.report;
  }
  return result.exit_code;
}
