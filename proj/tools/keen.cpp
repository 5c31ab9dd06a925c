// keen: command-line front end for the wage/employment/debt model.

#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "keen/commands.hpp"

namespace {

bool use_color() { return std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO); }

void report_error(const std::string& msg) {
  if (use_color())
    std::cerr << "\033[1;31merror:\033[0m " << msg << "\n";
  else
    std::cerr << "error: " << msg << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keen model toolkit: equilibria, stability, construction and simulation"};
  app.set_version_flag("--version", keen::kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  keen::CommandOptions opt;
  std::string out_dir;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate", "check the model's structural assumptions (exit 2 if any fail)"},
      {"equilibria", "locate every equilibrium and classify its stability"},
      {"simulate", "integrate a trajectory from initial_state"},
      {"build-kappa", "construct an investment function with a stable negative-debt equilibrium"},
      {"double-zero", "evaluate the double-zero eigenvalue condition"},
      {"sweep", "tabulate origin equilibria over sweep.axes"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--set", overrides, "override a configuration value, e.g. economy.r=0.02");
    sub->add_option("--out", out_dir, "write output files into this directory");
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json", "text"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error(e.what());
    std::cerr << "run 'keen --help' for usage\n";
    return keen::exit_code::usage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  if (!out_dir.empty()) opt.out_dir = out_dir;
  try {
    const keen::RunConfig cfg = keen::load_run_config(config_path, overrides);
    return keen::run_command(name, cfg, opt, std::cout);
  } catch (const keen::AssumptionError& e) {
    report_error(e.name() + ": " + e.what());
    return keen::exit_code_for(e);
  } catch (const keen::ConstraintError& e) {
    report_error(e.name() + ": " + e.what());
    return keen::exit_code_for(e);
  } catch (const keen::BlowUpError& e) {
    report_error(std::string(e.what()) + " (last finite sample at t=" + std::to_string(e.time()) + ")");
    return keen::exit_code_for(e);
  } catch (const std::exception& e) {
    report_error(e.what());
    return keen::exit_code_for(e);
  }
}
