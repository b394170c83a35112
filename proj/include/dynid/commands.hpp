#ifndef DYNID__COMMANDS_HPP_
#define DYNID__COMMANDS_HPP_

#include <cstdint>
#include <string>

namespace dynid {

/**
 * @brief One run's settings, loaded from a configuration document and
 *        overridable from the command line.
 *
 * Relative paths are resolved against the configuration file's directory.
 * Not every command uses every field; every command rereads only what it
 * needs and validates before writing anything.
 */
struct RunConfig {
  std::string model;           ///< chain description document
  std::string truth;           ///< ground-truth document (simulate)
  std::string dataset;         ///< dataset CSV to read
  std::string params;          ///< identified parameter file
  std::string pls_model;       ///< fitted regression model file
  std::string compare_params;  ///< second parameter file for comparison
  std::string out = "out";     ///< output directory

  double alpha = 0.99;
  std::string nu_policy = "rank";  ///< "rank" or "cv"
  int nu = 0;                      ///< fixed component count, 0 = policy decides
  double rank_tol = 1e-8;
  int cv_folds = 5;
  int window = 11;
  int degree = 3;
  /// The stacked measurement system carries its own constant term (the
  /// sensor-offset columns), so identification runs uncentered by default;
  /// centering would fold the offset into an intercept the physical
  /// parameter vector cannot represent.
  bool center = false;
  bool scale = false;
  std::string threshold_dof = "latent";  ///< "latent" or "output"
  double calibration_fraction = 0.0;     ///< tail share reserved for residual stats

  std::uint64_t seed = 1;
  double duration = 60.0;  ///< [s]
  double rate = 100.0;     ///< [Hz]
  double amplitude = 1.0;
  double min_frequency = 0.05;
  double max_frequency = 0.5;
};

/// Parses the configuration document; unknown keys and out-of-range values
/// raise config_error.
RunConfig load_config(const std::string& path);

void cmd_simulate(const RunConfig& config);
void cmd_identify(const RunConfig& config);
void cmd_validate(const RunConfig& config);
void cmd_detect(const RunConfig& config);
void cmd_roc(const RunConfig& config);

/**
 * @brief Runs one subcommand and maps failures to the process exit code:
 *        0 success, 1 numerical failure, 2 unreadable/invalid inputs.
 *        Error messages go to stderr.
 */
int run_command(const std::string& name, const RunConfig& config);

}  // namespace dynid

#endif  // DYNID__COMMANDS_HPP_
