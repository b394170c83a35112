#include "dynid/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dynid/anomaly.hpp"
#include "dynid/errors.hpp"
#include "dynid/io.hpp"
#include "dynid/model.hpp"
#include "dynid/pls.hpp"
#include "dynid/regressors.hpp"
#include "dynid/signal.hpp"
#include "dynid/sim.hpp"

namespace fs = std::filesystem;

namespace dynid {

namespace {

double as_number(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number()) {
    throw config_error("config: '" + key + "' must be a number");
  }
  return value.get<double>();
}

int as_int(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_integer()) {
    throw config_error("config: '" + key + "' must be an integer");
  }
  return value.get<int>();
}

bool as_bool(const nlohmann::json& value, const std::string& key) {
  if (!value.is_boolean()) {
    throw config_error("config: '" + key + "' must be a boolean");
  }
  return value.get<bool>();
}

std::string as_string(const nlohmann::json& value, const std::string& key) {
  if (!value.is_string()) {
    throw config_error("config: '" + key + "' must be a string");
  }
  return value.get<std::string>();
}

std::uint64_t as_seed(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_integer() ||
      (value.is_number_integer() && !value.is_number_unsigned() &&
       value.get<std::int64_t>() < 0)) {
    throw config_error("config: '" + key + "' must be a non-negative integer");
  }
  return value.get<std::uint64_t>();
}

std::string resolve_against(const fs::path& dir, const std::string& value) {
  if (value.empty()) {
    return value;
  }
  fs::path p(value);
  if (p.is_absolute()) {
    return value;
  }
  return (dir / p).lexically_normal().string();
}

void need(const std::string& command, const std::string& value, const std::string& key) {
  if (value.empty()) {
    throw config_error(command + ": config is missing '" + key + "'");
  }
}

std::string out_file(const RunConfig& config, const std::string& name) {
  return (fs::path(config.out) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw config_error("cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw config_error("cannot write '" + path + "'");
  }
}

ThresholdDof threshold_dof_from(const RunConfig& config) {
  return config.threshold_dof == "output" ? ThresholdDof::OutputDim
                                          : ThresholdDof::LatentCount;
}

PlsOptions pls_options_from(const RunConfig& config) {
  PlsOptions options;
  options.center = config.center;
  options.scale = config.scale;
  return options;
}

Dataset load_prepared_dataset(const std::string& command, const RunConfig& config,
                              const ChainModel& model) {
  need(command, config.dataset, "dataset");
  Dataset data = read_dataset_csv(config.dataset, model);
  estimate_derivatives(data, config.window, config.degree);
  return data;
}

/// Mean and sample deviation of per-sample prediction errors, expressed in
/// measurement units: force/torque norms and absolute PWM error per channel.
struct PredictionStats {
  double force_mean = 0.0;
  double force_std = 0.0;
  double torque_mean = 0.0;
  double torque_std = 0.0;
  Eigen::VectorXd pwm_mean;
  Eigen::VectorXd pwm_std;
};

void mean_std(const Eigen::VectorXd& values, double& mean, double& std_dev) {
  const auto n = values.size();
  mean = values.mean();
  std_dev = n > 1 ? std::sqrt((values.array() - mean).square().sum() /
                              static_cast<double>(n - 1))
                  : 0.0;
}

PredictionStats prediction_stats(const ChainModel& model,
                                 const ParameterLayout& layout,
                                 const Eigen::VectorXd& phi,
                                 const Dataset& data) {
  const Eigen::Index n = data.rows();
  const int m = model.n_measured();
  Eigen::VectorXd force_err(n);
  Eigen::VectorXd torque_err(n);
  Eigen::MatrixXd pwm_err(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [pwm_hat, wrench_hat] = predict_measurements(
        model, layout, phi, data.q.row(i).transpose(), data.dq.row(i).transpose(),
        data.ddq.row(i).transpose());
    const Vector6d dw = wrench_hat - data.wrench.row(i).transpose();
    force_err(i) = dw.head<3>().norm();
    torque_err(i) = dw.tail<3>().norm();
    pwm_err.row(i) =
        (pwm_hat - data.pwm.row(i).transpose()).cwiseAbs().transpose();
  }
  PredictionStats stats;
  mean_std(force_err, stats.force_mean, stats.force_std);
  mean_std(torque_err, stats.torque_mean, stats.torque_std);
  stats.pwm_mean.resize(m);
  stats.pwm_std.resize(m);
  for (int j = 0; j < m; ++j) {
    mean_std(pwm_err.col(j), stats.pwm_mean(j), stats.pwm_std(j));
  }
  return stats;
}

void append_prediction_stats(std::ostringstream& report,
                             const std::string& prefix,
                             const PredictionStats& stats) {
  report << prefix << "force_error_mean_N = " << format_number(stats.force_mean) << '\n'
         << prefix << "force_error_std_N = " << format_number(stats.force_std) << '\n'
         << prefix << "torque_error_mean_Nm = " << format_number(stats.torque_mean) << '\n'
         << prefix << "torque_error_std_Nm = " << format_number(stats.torque_std) << '\n';
  for (Eigen::Index j = 0; j < stats.pwm_mean.size(); ++j) {
    report << prefix << "pwm" << j << "_error_mean = "
           << format_number(stats.pwm_mean(j)) << '\n'
           << prefix << "pwm" << j << "_error_std = "
           << format_number(stats.pwm_std(j)) << '\n';
  }
}

/// Reshapes a stacked residual vector into one row per sample.
Eigen::MatrixXd residual_matrix(const Eigen::VectorXd& residual, int rows_per_sample) {
  const Eigen::Index count = residual.size() / rows_per_sample;
  return Eigen::Map<const Eigen::MatrixXd>(residual.data(), rows_per_sample, count)
      .transpose();
}

void check_phi_size(const ParameterLayout& layout, const Eigen::VectorXd& phi,
                    const std::string& path) {
  if (phi.size() != layout.cols) {
    throw config_error("'" + path + "' holds " + std::to_string(phi.size()) +
                       " parameters, the model expects " +
                       std::to_string(layout.cols));
  }
}

void check_stats_size(const ParameterLayout& layout, const ResidualStats& stats,
                      const std::string& path) {
  if (stats.output_dim() != layout.rows) {
    throw config_error("'" + path + "' calibrates " +
                       std::to_string(stats.output_dim()) +
                       " residual channels, the model expects " +
                       std::to_string(layout.rows));
  }
}

struct ConfusionCounts {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
};

ConfusionCounts count_confusion(const std::vector<std::uint8_t>& flags,
                                const std::vector<std::uint8_t>& labels) {
  ConfusionCounts counts;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (labels[i]) {
      (flags[i] ? counts.tp : counts.fn) += 1;
    } else {
      (flags[i] ? counts.fp : counts.tn) += 1;
    }
  }
  return counts;
}

std::string rate_or_na(long hits, long total) {
  if (total == 0) {
    return "n/a";
  }
  return format_number(static_cast<double>(hits) / static_cast<double>(total));
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw config_error("cannot open '" + path + "'");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw config_error("cannot parse '" + path + "': " + e.what());
  }
  if (!doc.is_object()) {
    throw config_error("config: root must be an object");
  }

  RunConfig config;
  const fs::path dir = fs::path(path).parent_path();
  bool out_given = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == "model") {
      config.model = resolve_against(dir, as_string(value, key));
    } else if (key == "truth") {
      config.truth = resolve_against(dir, as_string(value, key));
    } else if (key == "dataset") {
      config.dataset = resolve_against(dir, as_string(value, key));
    } else if (key == "params") {
      config.params = resolve_against(dir, as_string(value, key));
    } else if (key == "pls_model") {
      config.pls_model = resolve_against(dir, as_string(value, key));
    } else if (key == "compare_params") {
      config.compare_params = resolve_against(dir, as_string(value, key));
    } else if (key == "out") {
      config.out = resolve_against(dir, as_string(value, key));
      out_given = true;
    } else if (key == "alpha") {
      config.alpha = as_number(value, key);
    } else if (key == "nu_policy") {
      config.nu_policy = as_string(value, key);
    } else if (key == "nu") {
      config.nu = as_int(value, key);
    } else if (key == "rank_tol") {
      config.rank_tol = as_number(value, key);
    } else if (key == "cv_folds") {
      config.cv_folds = as_int(value, key);
    } else if (key == "window") {
      config.window = as_int(value, key);
    } else if (key == "degree") {
      config.degree = as_int(value, key);
    } else if (key == "center") {
      config.center = as_bool(value, key);
    } else if (key == "scale") {
      config.scale = as_bool(value, key);
    } else if (key == "threshold_dof") {
      config.threshold_dof = as_string(value, key);
    } else if (key == "calibration_fraction") {
      config.calibration_fraction = as_number(value, key);
    } else if (key == "seed") {
      config.seed = as_seed(value, key);
    } else if (key == "duration") {
      config.duration = as_number(value, key);
    } else if (key == "rate") {
      config.rate = as_number(value, key);
    } else if (key == "amplitude") {
      config.amplitude = as_number(value, key);
    } else if (key == "min_frequency") {
      config.min_frequency = as_number(value, key);
    } else if (key == "max_frequency") {
      config.max_frequency = as_number(value, key);
    } else {
      throw config_error("config: unknown key '" + key + "'");
    }
  }
  if (!out_given) {
    config.out = resolve_against(dir, config.out);
  }

  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw config_error("config: 'alpha' must lie in (0, 1)");
  }
  if (config.nu < 0) {
    throw config_error("config: 'nu' must be non-negative");
  }
  if (config.nu_policy != "rank" && config.nu_policy != "cv") {
    throw config_error("config: 'nu_policy' must be \"rank\" or \"cv\"");
  }
  if (config.threshold_dof != "latent" && config.threshold_dof != "output") {
    throw config_error("config: 'threshold_dof' must be \"latent\" or \"output\"");
  }
  if (config.cv_folds < 2) {
    throw config_error("config: 'cv_folds' must be at least 2");
  }
  if (!(config.rank_tol > 0.0)) {
    throw config_error("config: 'rank_tol' must be positive");
  }
  if (!(config.calibration_fraction >= 0.0 && config.calibration_fraction <= 0.9)) {
    throw config_error("config: 'calibration_fraction' must lie in [0, 0.9]");
  }
  if (!(config.duration > 0.0) || !(config.rate > 0.0)) {
    throw config_error("config: 'duration' and 'rate' must be positive");
  }
  return config;
}

void cmd_simulate(const RunConfig& config) {
  need("simulate", config.model, "model");
  need("simulate", config.truth, "truth");
  const ChainModel model = load_model_file(config.model);
  const GroundTruth truth = load_ground_truth_file(config.truth, model);

  TrajectoryLimits limits;
  limits.amplitude = config.amplitude;
  limits.min_frequency = config.min_frequency;
  limits.max_frequency = config.max_frequency;
  const Trajectory trajectory = generate_trajectory(
      model.n_q(), config.duration, config.rate, config.seed, limits);
  // Seed + 1 keeps the noise stream independent of the excitation draw.
  const Dataset data = simulate_measurements(model, truth, trajectory, config.seed + 1);
  const Eigen::VectorXd phi_star = ground_truth_parameters(model, truth);

  fs::create_directories(config.out);
  write_dataset_csv(out_file(config, "dataset.csv"), data);
  write_ground_truth(out_file(config, "truth_sidecar.json"), truth);
  write_parameters(out_file(config, "phi_star.json"), phi_star);
}

void cmd_identify(const RunConfig& config) {
  need("identify", config.model, "model");
  const ChainModel model = load_model_file(config.model);
  const ParameterLayout layout = parameter_layout(model);
  const Dataset data = load_prepared_dataset("identify", config, model);

  const Eigen::Index n = data.rows();
  const Eigen::Index cal_n =
      static_cast<Eigen::Index>(std::llround(config.calibration_fraction *
                                             static_cast<double>(n)));
  const Eigen::Index fit_n = n - cal_n;
  if (fit_n < 2) {
    throw config_error("identify: calibration split leaves fewer than 2 samples");
  }
  if (cal_n == 1) {
    throw config_error("identify: calibration split needs at least 2 samples");
  }

  const auto [A, b] = stack_dataset(model, data);
  const int rows_per = layout.rows;
  const Eigen::MatrixXd A_fit = A.topRows(fit_n * rows_per);
  const Eigen::VectorXd b_fit = b.head(fit_n * rows_per);

  const PlsOptions options = pls_options_from(config);
  const LatentPolicy policy = config.nu_policy == "cv" ? LatentPolicy::CrossValidation
                                                       : LatentPolicy::Rank;
  const int nu = config.nu > 0
                     ? config.nu
                     : select_latent_count(A_fit, b_fit, policy, config.rank_tol,
                                           config.cv_folds, options);
  const PlsModel fit = nipals_fit(A_fit, b_fit, nu, options);
  const Eigen::VectorXd phi = estimate_parameters(fit);

  // Residual calibration uses the reserved tail when one was requested,
  // otherwise the fit portion itself.
  const Eigen::Index stat_begin = cal_n > 0 ? fit_n : 0;
  const Eigen::Index stat_n = cal_n > 0 ? cal_n : fit_n;
  const Eigen::VectorXd stat_residual =
      b.segment(stat_begin * rows_per, stat_n * rows_per) -
      A.middleRows(stat_begin * rows_per, stat_n * rows_per) * phi;
  const ResidualStats stats =
      residual_stats(residual_matrix(stat_residual, rows_per), fit.latent_count);

  const Eigen::VectorXd fit_residual = b_fit - A_fit * phi;
  const double residual_rms =
      std::sqrt(fit_residual.squaredNorm() / static_cast<double>(fit_residual.size()));

  // A fixed component count below what the column space supports shows up
  // as a residual well above the rank-policy fit.
  bool underfit = false;
  int reference_nu = 0;
  double reference_rms = 0.0;
  if (config.nu > 0) {
    reference_nu = select_latent_count(A_fit, b_fit, LatentPolicy::Rank,
                                       config.rank_tol, config.cv_folds, options);
    if (fit.latent_count < reference_nu) {
      const PlsModel reference =
          nipals_fit(A_fit, b_fit, reference_nu, options);
      const Eigen::VectorXd reference_phi = estimate_parameters(reference);
      const Eigen::VectorXd r = b_fit - A_fit * reference_phi;
      reference_rms =
          std::sqrt(r.squaredNorm() / static_cast<double>(r.size()));
      underfit = residual_rms > 2.0 * reference_rms;
    }
  }

  Dataset fit_view;
  fit_view.t = data.t.head(fit_n);
  fit_view.q = data.q.topRows(fit_n);
  fit_view.pwm = data.pwm.topRows(fit_n);
  fit_view.wrench = data.wrench.topRows(fit_n);
  fit_view.dq = data.dq.topRows(fit_n);
  fit_view.ddq = data.ddq.topRows(fit_n);
  const PredictionStats pred = prediction_stats(model, layout, phi, fit_view);

  std::ostringstream report;
  report << "command = identify\n"
         << "samples = " << n << '\n'
         << "fit_samples = " << fit_n << '\n'
         << "calibration_samples = " << stat_n << '\n'
         << "rows = " << A.rows() << '\n'
         << "cols = " << A.cols() << '\n'
         << "latent_policy = " << (config.nu > 0 ? "fixed" : config.nu_policy) << '\n'
         << "latent_count = " << fit.latent_count << '\n'
         << "center = " << (config.center ? 1 : 0) << '\n'
         << "scale = " << (config.scale ? 1 : 0) << '\n'
         << "residual_rms = " << format_number(residual_rms) << '\n';
  append_prediction_stats(report, "", pred);
  if (config.nu > 0) {
    report << "reference_latent_count = " << reference_nu << '\n'
           << "reference_residual_rms = " << format_number(reference_rms) << '\n'
           << "underfit = " << (underfit ? 1 : 0) << '\n';
  }
  for (std::size_t i = 0; i < fit.warnings.size(); ++i) {
    report << "warning" << i << " = " << fit.warnings[i] << '\n';
  }

  fs::create_directories(config.out);
  write_parameters(out_file(config, "phi.json"), phi);
  write_pls_model(out_file(config, "pls_model.json"), fit, stats);
  write_text(out_file(config, "identify_report.txt"), report.str());
}

void cmd_validate(const RunConfig& config) {
  need("validate", config.model, "model");
  need("validate", config.params, "params");
  need("validate", config.pls_model, "pls_model");
  const ChainModel model = load_model_file(config.model);
  const ParameterLayout layout = parameter_layout(model);
  const Eigen::VectorXd phi = read_parameters(config.params);
  check_phi_size(layout, phi, config.params);
  const auto [fit, stats] = read_pls_model(config.pls_model);
  check_stats_size(layout, stats, config.pls_model);
  const Dataset data = load_prepared_dataset("validate", config, model);

  const ThresholdDof dof = threshold_dof_from(config);
  const DetectionResult detection =
      detect_contacts(model, data, phi, stats, config.alpha, dof);
  const long exceed_count =
      std::count(detection.flags.begin(), detection.flags.end(), std::uint8_t{1});
  const PredictionStats pred = prediction_stats(model, layout, phi, data);

  const bool comparing = !config.compare_params.empty();
  PredictionStats compare_pred;
  if (comparing) {
    const Eigen::VectorXd compare_phi = read_parameters(config.compare_params);
    check_phi_size(layout, compare_phi, config.compare_params);
    compare_pred = prediction_stats(model, layout, compare_phi, data);
  }

  std::ostringstream report;
  report << "command = validate\n"
         << "samples = " << data.rows() << '\n'
         << "alpha = " << format_number(config.alpha) << '\n'
         << "threshold_dof = " << config.threshold_dof << '\n'
         << "latent_count = " << stats.latent_count << '\n'
         << "t2_alpha = " << format_number(detection.threshold) << '\n'
         << "exceed_count = " << exceed_count << '\n'
         << "exceed_rate = "
         << format_number(static_cast<double>(exceed_count) /
                          static_cast<double>(data.rows()))
         << '\n';
  append_prediction_stats(report, "", pred);
  if (comparing) {
    append_prediction_stats(report, "compare_", compare_pred);
    report << "\nmetric\tprimary\tcompare\n"
           << "force_error_mean_N\t" << format_number(pred.force_mean) << '\t'
           << format_number(compare_pred.force_mean) << '\n'
           << "force_error_std_N\t" << format_number(pred.force_std) << '\t'
           << format_number(compare_pred.force_std) << '\n'
           << "torque_error_mean_Nm\t" << format_number(pred.torque_mean) << '\t'
           << format_number(compare_pred.torque_mean) << '\n'
           << "torque_error_std_Nm\t" << format_number(pred.torque_std) << '\t'
           << format_number(compare_pred.torque_std) << '\n';
    for (Eigen::Index j = 0; j < pred.pwm_mean.size(); ++j) {
      report << "pwm" << j << "_error_mean\t" << format_number(pred.pwm_mean(j))
             << '\t' << format_number(compare_pred.pwm_mean(j)) << '\n';
    }
  }

  std::ostringstream trace;
  trace << "# t2_alpha = " << format_number(detection.threshold) << '\n'
        << "t\tt2\n";
  for (Eigen::Index i = 0; i < detection.t2.size(); ++i) {
    trace << format_number(data.t(i)) << '\t' << format_number(detection.t2(i))
          << '\n';
  }

  fs::create_directories(config.out);
  write_text(out_file(config, "validate_report.txt"), report.str());
  write_text(out_file(config, "t2_trace.tsv"), trace.str());
}

void cmd_detect(const RunConfig& config) {
  need("detect", config.model, "model");
  need("detect", config.params, "params");
  need("detect", config.pls_model, "pls_model");
  const ChainModel model = load_model_file(config.model);
  const ParameterLayout layout = parameter_layout(model);
  const Eigen::VectorXd phi = read_parameters(config.params);
  check_phi_size(layout, phi, config.params);
  const auto [fit, stats] = read_pls_model(config.pls_model);
  check_stats_size(layout, stats, config.pls_model);
  const Dataset data = load_prepared_dataset("detect", config, model);
  if (data.contact.size() != static_cast<std::size_t>(data.rows())) {
    throw config_error("detect: dataset has no contact column");
  }

  const DetectionResult detection = detect_contacts(
      model, data, phi, stats, config.alpha, threshold_dof_from(config));
  const ConfusionCounts counts = count_confusion(detection.flags, data.contact);

  std::ostringstream report;
  report << "command = detect\n"
         << "samples = " << data.rows() << '\n'
         << "alpha = " << format_number(config.alpha) << '\n'
         << "threshold_dof = " << config.threshold_dof << '\n'
         << "t2_alpha = " << format_number(detection.threshold) << '\n'
         << "contact_count = " << counts.tp + counts.fn << '\n'
         << "flagged_count = " << counts.tp + counts.fp << '\n'
         << "true_positives = " << counts.tp << '\n'
         << "false_positives = " << counts.fp << '\n'
         << "true_negatives = " << counts.tn << '\n'
         << "false_negatives = " << counts.fn << '\n'
         << "tpr = " << rate_or_na(counts.tp, counts.tp + counts.fn) << '\n'
         << "fpr = " << rate_or_na(counts.fp, counts.fp + counts.tn) << '\n';

  std::ostringstream trace;
  trace << "# t2_alpha = " << format_number(detection.threshold) << '\n'
        << "t\tt2\tflag\tlabel\n";
  for (Eigen::Index i = 0; i < detection.t2.size(); ++i) {
    trace << format_number(data.t(i)) << '\t' << format_number(detection.t2(i))
          << '\t' << int(detection.flags[i]) << '\t' << int(data.contact[i])
          << '\n';
  }

  fs::create_directories(config.out);
  write_text(out_file(config, "detect_report.txt"), report.str());
  write_text(out_file(config, "detect_trace.tsv"), trace.str());
}

void cmd_roc(const RunConfig& config) {
  need("roc", config.model, "model");
  need("roc", config.params, "params");
  need("roc", config.pls_model, "pls_model");
  const ChainModel model = load_model_file(config.model);
  const ParameterLayout layout = parameter_layout(model);
  const Eigen::VectorXd phi = read_parameters(config.params);
  check_phi_size(layout, phi, config.params);
  const auto [fit, stats] = read_pls_model(config.pls_model);
  check_stats_size(layout, stats, config.pls_model);
  const Dataset data = load_prepared_dataset("roc", config, model);
  if (data.contact.size() != static_cast<std::size_t>(data.rows())) {
    throw config_error("roc: dataset has no contact column");
  }

  const DetectionResult detection = detect_contacts(
      model, data, phi, stats, config.alpha, threshold_dof_from(config));
  const std::vector<RocPoint> curve = roc_curve(detection.t2, data.contact);
  const double area = roc_area(curve);

  // Mark the sweep point closest to the alpha control limit.
  std::size_t mark = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!std::isfinite(curve[i].threshold)) {
      continue;
    }
    const double gap = std::abs(curve[i].threshold - detection.threshold);
    if (gap < best) {
      best = gap;
      mark = i;
    }
  }

  std::ostringstream table;
  table << "# area = " << format_number(area) << '\n'
        << "# t2_alpha = " << format_number(detection.threshold) << '\n'
        << "threshold\tfpr\ttpr\tat_alpha\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    table << format_number(curve[i].threshold) << '\t'
          << format_number(curve[i].fpr) << '\t' << format_number(curve[i].tpr)
          << '\t' << (std::isfinite(best) && i == mark ? 1 : 0) << '\n';
  }

  fs::create_directories(config.out);
  write_text(out_file(config, "roc.tsv"), table.str());
}

int run_command(const std::string& name, const RunConfig& config) {
  try {
    if (name == "simulate") {
      cmd_simulate(config);
    } else if (name == "identify") {
      cmd_identify(config);
    } else if (name == "validate") {
      cmd_validate(config);
    } else if (name == "detect") {
      cmd_detect(config);
    } else if (name == "roc") {
      cmd_roc(config);
    } else {
      throw config_error("unknown command '" + name + "'");
    }
    return 0;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dynid
