#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "corrsim/cli.hpp"
#include "corrsim/error.hpp"

using namespace corrsim;

int main(int argc, char** argv) {
  CLI::App app{"Correlated random vectors with fixed marginals"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> streams;
  std::string csv_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "job configuration (JSON)")->required();
    sub->add_option("--out", out_path, "write results here instead of stdout");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--streams", streams, "override the number of worker streams")->check(CLI::PositiveNumber);
  };
  CLI::App* bounds = app.add_subcommand("bounds", "pairwise correlation extremes");
  CLI::App* plan = app.add_subcommand("plan", "convexity matrix, feasibility and recipe");
  CLI::App* sample = app.add_subcommand("sample", "generate CSV samples");
  CLI::App* verify = app.add_subcommand("verify", "check a CSV sample against the job's targets");
  for (CLI::App* s : {bounds, plan, sample, verify}) add_common(s);
  verify->add_option("csv", csv_path, "CSV produced by sample")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::exit_usage;
  }

  cli::JobConfig cfg;
  try {
    cfg = cli::load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_usage;
  }
  if (seed) cfg.seed = *seed;
  if (streams) cfg.streams = *streams;

  // Output is buffered so a failing command never leaves a partial file.
  std::ostringstream buffer;
  int rc = cli::exit_ok;
  if (bounds->parsed()) rc = cli::cmd_bounds(cfg, buffer, std::cerr);
  else if (plan->parsed()) rc = cli::cmd_plan(cfg, buffer, std::cerr);
  else if (sample->parsed()) rc = cli::cmd_sample(cfg, buffer, std::cerr);
  else {
    std::ifstream csv(csv_path, std::ios::binary);
    if (!csv) {
      std::cerr << "error: cannot open " << csv_path << "\n";
      return cli::exit_usage;
    }
    rc = cli::cmd_verify(cfg, csv, buffer, std::cerr);
  }

  const std::string text = buffer.str();
  if (text.empty()) return rc;
  if (out_path.empty()) {
    std::cout.write(text.data(), static_cast<std::streamsize>(text.size()));
    std::cout.flush();
  } else {
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    file.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!file) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return cli::exit_fail;
    }
  }
  return rc;
}
