#ifndef DYNID__SIGNAL_HPP_
#define DYNID__SIGNAL_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace dynid {

/**
 * @brief One recorded run: timestamps, joint angles, PWM commands and the
 *        sensor wrench, row per sample.
 *
 * contact is empty for unlabeled data. dq/ddq stay empty until
 * estimate_derivatives fills them (the simulator can also fill them with
 * exact values for in-memory use; they are never written to disk).
 */
struct Dataset {
  Eigen::VectorXd t;
  Eigen::MatrixXd q;       ///< N x n_q [rad]
  Eigen::MatrixXd pwm;     ///< N x measured joints
  Eigen::MatrixXd wrench;  ///< N x 6, fx fy fz mx my mz
  std::vector<std::uint8_t> contact;

  Eigen::MatrixXd dq;
  Eigen::MatrixXd ddq;

  Eigen::Index rows() const { return t.size(); }
  bool has_derivatives() const { return dq.rows() == t.size() && ddq.rows() == t.size(); }
};

/**
 * @brief Fills dq/ddq with noncausal local polynomial derivative estimates.
 *
 * Around every sample a window of @p window points is least-squares fitted
 * with a polynomial of degree @p degree in the actual timestamps; the fit's
 * first and second derivatives at the sample become dq and ddq. Windows are
 * shifted one-sided at the edges so every estimate uses exactly @p window
 * points.
 *
 * Requires an odd window, 2 <= degree < window, at least @p window samples
 * and strictly increasing timestamps. Exact for polynomial signals up to
 * @p degree.
 */
void estimate_derivatives(Dataset& data, int window = 11, int degree = 3);

}  // namespace dynid

#endif  // DYNID__SIGNAL_HPP_
