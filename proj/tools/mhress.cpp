// mhress: essential-spectral-radius bounds for random-walk Metropolis-Hastings.
//
//   mhress bound --config exp.json --out results/
//   mhress asymptotic --set target.family=gauss
//   mhress sample --config exp.json --trace trace.csv

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mhress/commands.hpp"

int main(int argc, char** argv) {
  mhress::CommandOptions opts;
  CLI::App app{"Bounds on the essential spectral radius of random-walk Metropolis-Hastings kernels"};
  app.set_version_flag("--version", std::string("mhress ") + mhress::tool_version());
  app.require_subcommand(1);

  const auto add_common = [&opts](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "JSON experiment document");
    cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--set", opts.overrides, "override a config key, KEY=VAL (repeatable)");
    cmd->add_option("--format", opts.format, "csv, json or both")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json", "both"}));
  };

  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"bound", "truncated constants r_a, r'_a, beta_a and alpha_a over bound.a_list"},
      {"asymptotic", "tail-ratio limits r'_inf, beta_inf, gamma_inf and alpha_inf"},
      {"profile", "rejection probability r(x) on the profile grid"},
      {"spectrum", "discretized spectrum and operator-norm checks (heuristic)"},
      {"sample", "simulate chains and compare with the computed kernel"},
  };
  for (const auto& c : commands) {
    CLI::App* cmd = app.add_subcommand(c.name, c.help);
    add_common(cmd);
    if (std::string(c.name) == "sample") {
      cmd->add_option("--trace", opts.trace_path, "write chain 0 as CSV (step,x,accepted)");
    }
    cmd->callback([&opts, cmd] { opts.command = cmd->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() != 0) std::cerr << app.help();
    return mhress::kExitConfig;
  }
  return mhress::run_command(opts, std::cout, std::cerr);
}
