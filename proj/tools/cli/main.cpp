#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "bem/error.hpp"
#include "commands.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("bem");
  logger->set_pattern("%l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("BEM_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Blade element momentum solver"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  bem::cli::RunOptions opts;
  std::string method;

  const auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Configuration file")->required();
    sub->add_option("--out", out_path, "Output CSV (default: config 'output' or stdout)");
    sub->add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
    return sub;
  };
  add("solve", "Solve each element with one or all methods")
      ->add_option("--method", method, "usual|fixed|newton|bisect|all")
      ->check(CLI::IsMember({"usual", "fixed", "newton", "bisect", "all"}));
  add("scan", "List every root of each element");
  add("design", "Twist and chord per speed ratio");
  add("sweep", "Power coefficient over the speed-ratio range");
  add("check", "Existence and convergence conditions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bem::cli::kExitConfig;
  }
  if (!method.empty()) opts.method = method;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const bem::cli::RunConfig cfg = bem::cli::load_config(config_path);
    std::ofstream file;
    std::filesystem::path target;
    if (!out_path.empty()) {
      target = out_path;
    } else if (cfg.output) {
      target = *cfg.output;
    }
    if (!target.empty()) {
      file.open(target, std::ios::binary);
      if (!file) {
        spdlog::error("cannot write '{}'", target.string());
        return bem::cli::kExitConfig;
      }
    }
    std::ostream& table = file.is_open() ? static_cast<std::ostream&>(file) : std::cout;
    std::ostringstream summary;

    int code = bem::cli::kExitOk;
    if (command == "solve") code = bem::cli::cmd_solve(cfg, opts, table, summary);
    if (command == "scan") code = bem::cli::cmd_scan(cfg, opts, table, summary);
    if (command == "design") code = bem::cli::cmd_design(cfg, opts, table, summary);
    if (command == "sweep") code = bem::cli::cmd_sweep(cfg, opts, table, summary);
    if (command == "check") code = bem::cli::cmd_check(cfg, opts, table, summary);
    table.flush();
    (file.is_open() ? std::cout : std::cerr) << summary.str() << std::flush;
    return code;
  } catch (const bem::Error& e) {
    spdlog::error("{}: {}", bem::to_string(e.kind()), e.what());
    return bem::cli::exit_code_for(e);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return bem::cli::kExitFailure;
  }
}
