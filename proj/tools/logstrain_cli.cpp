#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "logstrain/commands.hpp"
#include "logstrain/report_io.hpp"

namespace {

using Command = logstrain::Json (*)(const logstrain::Json&, const logstrain::CommandOptions&);

struct Subcommand {
  const char* name;
  const char* help;
  Command run;
  bool needs_config;
};

constexpr Subcommand kSubcommands[] = {
    {"eval", "energy and stresses of a model at F", logstrain::cmd_eval, true},
    {"counterexample", "simple-shear curves h(t) for a frozen log plastic strain",
     logstrain::cmd_counterexample, false},
    {"scan", "rank-one convexity scan at one or more base points", logstrain::cmd_scan, true},
    {"path", "drive a strain path through a plasticity formulation", logstrain::cmd_path, true},
    {"compare", "drive one path through several formulations", logstrain::cmd_compare, true},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logstrain: Hencky-type energies, plastic flow and ellipticity checks"};
  app.require_subcommand(1);

  std::string config_path;
  logstrain::CommandOptions options;
  for (const Subcommand& s : kSubcommands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    auto* opt = sub->add_option("--config", config_path, "JSON configuration file");
    if (s.needs_config) opt->required();
    sub->add_option("--out", options.out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", options.threads, "worker threads, 0 = auto")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--seed", options.seed, "seed for randomized scans")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : logstrain::kExitConfig;
  }

  for (const Subcommand& s : kSubcommands) {
    if (!app.got_subcommand(s.name)) continue;
    try {
      const logstrain::Json config =
          config_path.empty() ? logstrain::Json::object() : logstrain::load_json_file(config_path);
      logstrain::Json summary = s.run(config, options);
      summary["options"] = {{"out", options.out_dir}, {"threads", options.threads}, {"seed", options.seed}};
      const std::string text = logstrain::dump_json(summary);
      std::fwrite(text.data(), 1, text.size(), stdout);
      return logstrain::kExitOk;
    } catch (const std::exception& e) {
      std::cerr << "logstrain " << s.name << ": " << e.what() << "\n";
      return logstrain::exit_code_for(e);
    }
  }
  return logstrain::kExitInternal;
}
