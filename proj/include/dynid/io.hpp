#ifndef DYNID__IO_HPP_
#define DYNID__IO_HPP_

#include <string>
#include <utility>

#include "dynid/anomaly.hpp"
#include "dynid/model.hpp"
#include "dynid/pls.hpp"
#include "dynid/signal.hpp"
#include "dynid/sim.hpp"

namespace dynid {

/**
 * @brief Writes the run as CSV: header line
 *        t,q0..,pwm0..,fx,fy,fz,mx,my,mz[,contact], UTF-8, '.' decimals,
 *        LF line endings, 17 significant digits. Derivative columns are
 *        never written.
 */
void write_dataset_csv(const std::string& path, const Dataset& data);

/**
 * @brief Reads a dataset CSV and checks the header against the model's
 *        joint and PWM channel counts; a missing column is reported by
 *        name. The optional trailing contact column fills the labels.
 */
Dataset read_dataset_csv(const std::string& path, const ChainModel& model);

/// Ground-truth document: bodies, offsets, friction, gains, noise, contacts.
GroundTruth load_ground_truth_file(const std::string& path, const ChainModel& model);
void write_ground_truth(const std::string& path, const GroundTruth& truth);

/// Identified parameter vector with its column count.
void write_parameters(const std::string& path, const Eigen::VectorXd& phi);
Eigen::VectorXd read_parameters(const std::string& path);

/// Fitted regression model plus residual calibration, matrices row-major.
void write_pls_model(const std::string& path, const PlsModel& model,
                     const ResidualStats& stats);
std::pair<PlsModel, ResidualStats> read_pls_model(const std::string& path);

/// Full-precision decimal rendering used by every text artifact.
std::string format_number(double value);

}  // namespace dynid

#endif  // DYNID__IO_HPP_
