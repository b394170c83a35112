#ifndef DYNID__REGRESSORS_HPP_
#define DYNID__REGRESSORS_HPP_

#include <utility>
#include <vector>

#include "dynid/model.hpp"
#include "dynid/signal.hpp"

namespace dynid {

/**
 * @brief Column and row bookkeeping of the per-sample linear system.
 *
 * One parameter vector covers the whole chain, in this fixed column order:
 *   [0, 10*n_bodies)          inertial parameters, 10 per body, base to tip
 *   [+0, +6)                  sensor wrench offset
 *   4 per coupled joint       joint friction, transmission order
 *   4 per uncoupled joint     joint friction, measured order
 *   4 per coupled joint       motor-side friction, transmission order
 *   1 per coupled joint       drive gain, transmission order
 *   1 per uncoupled joint     drive gain, measured order
 *
 * Rows per sample: coupled joints first (transmission order), uncoupled
 * measured joints next (measured order), then the six wrench rows. Only the
 * wrench rows have a non-zero right-hand side.
 */
struct ParameterLayout {
  int n_bodies = 0;
  int n_q = 0;
  std::vector<int> coupled_joints;
  std::vector<int> uncoupled_joints;
  std::vector<int> pwm_index;  ///< per q index, PWM column or -1

  int inertial_cols = 0;
  int wrench_offset_col = 0;
  int coupled_friction_col = 0;
  int uncoupled_friction_col = 0;
  int motor_friction_col = 0;
  int coupled_gain_col = 0;
  int uncoupled_gain_col = 0;
  int cols = 0;

  int wrench_row = 0;  ///< first of the six wrench rows
  int rows = 0;        ///< rows per sample block

  int body_col(int body, int param) const { return 10 * body + param; }
};

ParameterLayout parameter_layout(const ChainModel& model);

/**
 * @brief Joint-torque regressor: tau = Y * phi for the 10*n_bodies inertial
 *        parameters, one row per revolute joint.
 *
 * Columns of bodies proximal to a joint are zero in that joint's row.
 */
Eigen::MatrixXd inertial_torque_regressor(const ChainModel& model,
                                          const std::vector<BodyKin>& kin);

/**
 * @brief Sensor-wrench regressor: w = Y * phi, six rows in sensor
 *        coordinates about the sensor origin, force before moment.
 *
 * Columns of bodies proximal to the cut are zero.
 */
Eigen::MatrixXd sensor_wrench_regressor(const ChainModel& model,
                                        const std::vector<BodyKin>& kin);

/**
 * @brief Friction regressor row [sgn(v)^+, -sgn(v)^-, v^+, -v^-] for the
 *        parameters [coulomb+, coulomb-, viscous+, viscous-], where
 *        x^+ = max(x, 0) and x^- = max(-x, 0). Zero velocity gives a zero
 *        row.
 */
Eigen::RowVector4d friction_regressor_row(double rate);

/// Motor-side blocks of a coupled group's torque balance rows.
struct CouplingBlocks {
  Eigen::MatrixXd motor_friction;  ///< |group| x 4|group|, maps motor friction parameters
  Eigen::MatrixXd gain;            ///< |group| x |group|, maps drive gains (PWM columns)
};

/**
 * @brief Builds T^T * blockdiag(friction rows at motor rates) and
 *        -T^T * diag(pwm) for one coupled group.
 *
 * Motor rates are torque_map^T * joint_rates. With an identity map both
 * blocks reduce to the uncoupled single-joint form.
 */
CouplingBlocks coupling_blocks(const CoupledGroup& group,
                               const Eigen::VectorXd& joint_rates,
                               const Eigen::VectorXd& pwm);

/// One sample's rows of the stacked system A * phi = rhs.
struct SampleBlock {
  Eigen::MatrixXd A;
  Eigen::VectorXd rhs;
};

/**
 * @brief Assembles the full measurement block of one sample: torque balance
 *        rows for every measured joint and the six sensor equations.
 *
 * pwm is ordered like measured_joints, wrench is the sensor reading.
 * Throws std::invalid_argument on size mismatches or non-finite
 * measurements.
 */
SampleBlock assemble_sample(const ChainModel& model,
                            const ParameterLayout& layout,
                            const Eigen::VectorXd& q,
                            const Eigen::VectorXd& dq,
                            const Eigen::VectorXd& ddq,
                            const Eigen::VectorXd& pwm,
                            const Vector6d& wrench);

/**
 * @brief Stacks every sample of the dataset into one regression problem.
 *
 * The dataset must already carry derivative estimates. Row blocks keep the
 * sample order.
 */
std::pair<Eigen::MatrixXd, Eigen::VectorXd> stack_dataset(const ChainModel& model,
                                                          const Dataset& data);

/**
 * @brief Re-synthesizes the measurements a parameter vector predicts for one
 *        state sample: PWM per measured joint and the sensor wrench.
 *
 * Inverts the torque balance rows for the PWM channels, so every drive gain
 * in @p phi must be bounded away from zero (throws numeric_error otherwise).
 */
std::pair<Eigen::VectorXd, Vector6d> predict_measurements(const ChainModel& model,
                                                          const ParameterLayout& layout,
                                                          const Eigen::VectorXd& phi,
                                                          const Eigen::VectorXd& q,
                                                          const Eigen::VectorXd& dq,
                                                          const Eigen::VectorXd& ddq);

}  // namespace dynid

#endif  // DYNID__REGRESSORS_HPP_
