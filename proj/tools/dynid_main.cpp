// Command line front end: five subcommands over one configuration document,
// with the handful of settings worth overriding per run exposed as flags.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dynid/commands.hpp"
#include "dynid/errors.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  double alpha = -1.0;
  int nu = -1;
  std::int64_t seed = -1;
  std::string out;
};

void add_common_options(CLI::App* sub, CliOverrides& overrides) {
  sub->add_option("--config", overrides.config_path, "configuration document")
      ->required();
  sub->add_option("--alpha", overrides.alpha, "detection confidence level");
  sub->add_option("--nu", overrides.nu, "fixed latent component count");
  sub->add_option("--seed", overrides.seed, "random seed");
  sub->add_option("--out", overrides.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial-chain dynamic parameter identification and contact monitoring"};
  app.require_subcommand(1);

  CliOverrides overrides;
  add_common_options(app.add_subcommand("simulate", "generate a measurement run"),
                     overrides);
  add_common_options(app.add_subcommand("identify", "fit parameters from a dataset"),
                     overrides);
  add_common_options(
      app.add_subcommand("validate", "score predictions on a held-out dataset"),
      overrides);
  add_common_options(
      app.add_subcommand("detect", "flag contact samples against labels"),
      overrides);
  add_common_options(app.add_subcommand("roc", "sweep the detection threshold"),
                     overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  dynid::RunConfig config;
  try {
    config = dynid::load_config(overrides.config_path);
    if (overrides.alpha >= 0.0) {
      if (!(overrides.alpha > 0.0 && overrides.alpha < 1.0)) {
        throw dynid::config_error("--alpha must lie in (0, 1)");
      }
      config.alpha = overrides.alpha;
    }
    if (overrides.nu >= 0) {
      config.nu = overrides.nu;
    }
    if (overrides.seed >= 0) {
      config.seed = static_cast<std::uint64_t>(overrides.seed);
    }
    if (!overrides.out.empty()) {
      config.out = overrides.out;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  return dynid::run_command(app.get_subcommands().front()->get_name(), config);
}
