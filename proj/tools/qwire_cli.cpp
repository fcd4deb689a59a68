// qwire: command-line front end.
//
//   qwire <geometry|spectrum|holonomy|evolve|tube|reproduce-paper>
//         [--config PATH] [--out DIR] [--threads K] [--print-config]
//
// Exit codes: 0 success, 1 reproduce-paper ran but a check failed,
// 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qwire/app/commands.hpp"
#include "qwire/app/config.hpp"
#include "qwire/app/reproduce.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_checks_failed = 1;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

qwire::app::json error_json(const std::string& command, const qwire::Error& e) {
  return {{"command", command},
          {"status", "error"},
          {"error", {{"kind", qwire::to_string(e.kind())}, {"message", e.what()}}},
          {"git_revision", QWIRE_GIT_REVISION}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Berry phase of a particle bound to a deformed closed wire"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = "out";
  std::size_t threads = 0;
  bool print_config = false;
  app.add_option("--config", config_path, "JSON run configuration (defaults used when absent)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "worker threads, 0 = hardware concurrency")->capture_default_str();
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");

  const char* names[] = {"geometry", "spectrum", "holonomy", "evolve", "tube", "reproduce-paper"};
  const char* help[] = {"Frenet profile (s, kappa, tau, tau', speed) at the configured point",
                        "lowest tangential levels and ground-state density",
                        "Wilson loop, plaquette curvature and Wilczek-Zee transport",
                        "time-dependent propagation around the driving loop",
                        "doublet density on a tube around the curve after m revolutions",
                        "full reproduction with a pass/fail table"};
  for (int i = 0; i < 6; ++i) app.add_subcommand(names[i], help[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  qwire::app::Context ctx;
  try {
    ctx.config = config_path.empty() ? qwire::app::RunConfig{} : qwire::app::load_config(config_path);
    ctx.threads = threads;
    if (print_config) {
      std::cout << qwire::app::to_json(ctx.config).dump(2) << '\n';
      return exit_ok;
    }
    ctx.out = qwire::app::prepare_out_dir(out_dir);
  } catch (const qwire::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  }

  try {
    qwire::app::json result;
    if (command == "geometry") result = qwire::app::cmd_geometry(ctx);
    else if (command == "spectrum") result = qwire::app::cmd_spectrum(ctx);
    else if (command == "holonomy") result = qwire::app::cmd_holonomy(ctx);
    else if (command == "evolve") result = qwire::app::cmd_evolve(ctx);
    else if (command == "tube") result = qwire::app::cmd_tube(ctx);
    else {
      bool all_pass = false;
      qwire::app::cmd_reproduce_paper(ctx, all_pass);
      return all_pass ? exit_ok : exit_checks_failed;
    }
    if (command != "reproduce-paper") std::cout << result.dump(2) << '\n';
    return exit_ok;
  } catch (const qwire::Error& e) {
    std::cerr << command << ": " << e.what() << '\n';
    const std::string stem = command == "reproduce-paper" ? "report" : command;
    try {
      qwire::app::write_json(ctx.out / (stem + ".json"), error_json(command, e));
    } catch (const qwire::Error&) {
    }
    return e.is_numerical() ? exit_numerical : exit_config;
  }
}
