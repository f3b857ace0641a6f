#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "kfr/commands.hpp"
#include "kfr/errors.hpp"
#include "kfr/io.hpp"

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("kfr");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("KFR_LOG");
  const std::string level = env ? env : "info";
  if (level == "quiet") {
    spdlog::set_level(spdlog::level::off);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::info);
    if (level != "info") spdlog::warn("KFR_LOG={} not recognized, using info", level);
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Fusion frames in W-metric spaces"};
  app.set_version_flag("--version", std::string(kfr::version()));
  std::string command_name;
  std::string input;
  std::string output;
  std::string epsilons_csv;
  double tol = 0.0;
  kfr::CommandFlags flags;

  app.add_option("command", command_name, "analyze | equivalence | transfer | sweep | spectral | check | gen")
      ->required();
  app.add_option("--input", input, "instance file (JSON)");
  app.add_option("--output", output, "write the report (or generated instance) here instead of stdout");
  app.add_option("--metric", flags.metric, "analyze: hilbert or krein")->check(CLI::IsMember({"hilbert", "krein"}));
  app.add_option("--seed", flags.seed, "gen: random seed");
  app.add_option("--dim", flags.dim, "gen: dimension");
  app.add_option("--subspaces", flags.subspaces, "gen: number of subspaces");
  app.add_option("--family", flags.family, "sweep: diag for W(eps) = diag(1, ..., 1, eps)")
      ->check(CLI::IsMember({"diag"}));
  auto* eps_opt = app.add_option("--epsilons", epsilons_csv, "sweep: comma separated epsilons");
  auto* tol_opt = app.add_option("--tol", tol, "frame tolerance (cluster tolerance for spectral)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto command = kfr::parse_command(command_name);
    if (!command) throw kfr::Error(kfr::ErrorKind::Validation, "unknown command '" + command_name + "'");
    if (*eps_opt) flags.epsilons = kfr::parse_csv_doubles(epsilons_csv, "--epsilons");
    if (*tol_opt) flags.tol = tol;

    std::vector<kfr::ProblemInstance> instances;
    if (*command != kfr::Command::Gen) {
      if (input.empty()) throw kfr::Error(kfr::ErrorKind::Validation, "--input is required");
      instances = kfr::parse_instances(input);
      for (const auto& inst : instances)
        for (const auto& note : inst.notes) spdlog::warn("{}", note);
    }

    const auto start = std::chrono::steady_clock::now();
    const kfr::CommandResult result = kfr::run_command(*command, instances, flags);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    spdlog::debug("{} finished in {:.3f} ms", command_name, ms);

    if (output.empty()) {
      std::fwrite(result.output.data(), 1, result.output.size(), stdout);
    } else {
      kfr::write_text_file(output, result.output);
      spdlog::info("wrote {}", output);
    }
    if (result.exit_status != 0) spdlog::error("{}: one or more checks failed", command_name);
    return result.exit_status;
  } catch (const kfr::Error& e) {
    spdlog::error("{}", e.what());
    return kfr::exit_status(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("unexpected failure: {}", e.what());
    return 2;
  }
}
