#ifndef DYNID__SIM_HPP_
#define DYNID__SIM_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "dynid/model.hpp"
#include "dynid/signal.hpp"

namespace dynid {

/// One sinusoid of a joint's excitation signal.
struct SineComponent {
  double amplitude = 0.0;  ///< [rad]
  double frequency = 0.0;  ///< [Hz]
  double phase = 0.0;      ///< [rad]
};

/**
 * @brief Smooth multi-sine excitation, evaluable analytically at any time.
 *
 * Each joint is a sum of three sinusoids whose amplitudes add up to at most
 * the configured excursion budget, so |q| stays inside the limit by
 * construction.
 */
struct Trajectory {
  double duration = 0.0;  ///< [s]
  double rate = 0.0;      ///< [Hz]
  std::vector<std::array<SineComponent, 3>> joints;

  Eigen::Index samples() const;
  double q(int joint, double t) const;
  double dq(int joint, double t) const;
  double ddq(int joint, double t) const;
};

struct TrajectoryLimits {
  double amplitude = 1.0;      ///< max |q| per joint [rad]
  double min_frequency = 0.05;  ///< [Hz]
  double max_frequency = 0.5;   ///< [Hz], must stay below rate / 2
};

/**
 * @brief Draws a seeded excitation for @p n_joints joints. Identical seeds
 *        give identical trajectories. Requires duration * rate >= 10 and
 *        max_frequency below the Nyquist rate.
 */
Trajectory generate_trajectory(int n_joints,
                               double duration,
                               double rate,
                               std::uint64_t seed,
                               const TrajectoryLimits& limits = {});

/**
 * @brief Constant external wrench pressed against one body for a time span.
 *
 * The wrench is expressed in base coordinates and acts at the body's frame
 * origin; samples with start <= t <= end carry the contact label.
 */
struct ContactEpisode {
  double start = 0.0;
  double end = 0.0;
  Vector6d wrench = Vector6d::Zero();
  int body = 0;
};

/// Standard deviations of the injected i.i.d. Gaussian measurement noise.
struct NoiseSpec {
  double wrench_force = 0.0;   ///< [N] per force axis
  double wrench_torque = 0.0;  ///< [N m] per moment axis
  double pwm = 0.0;            ///< [PWM units] per measured joint
  double encoder = 0.0;        ///< [rad] per joint angle
};

/// Asymmetric Coulomb plus viscous friction coefficients,
/// [coulomb+, coulomb-, viscous+, viscous-].
struct FrictionParams {
  double coulomb_pos = 0.0;
  double coulomb_neg = 0.0;
  double viscous_pos = 0.0;
  double viscous_neg = 0.0;

  Eigen::Vector4d as_vector() const {
    return {coulomb_pos, coulomb_neg, viscous_pos, viscous_neg};
  }
};

/**
 * @brief Everything the forward simulation knows and the identification is
 *        supposed to recover (plus the injected corruption).
 *
 * joint_friction and drive_gains align with measured_joints, motor_friction
 * with the coupled group's joint list.
 */
struct GroundTruth {
  std::vector<BodyInertia> bodies;
  Vector6d wrench_offset = Vector6d::Zero();
  std::vector<FrictionParams> joint_friction;
  std::vector<FrictionParams> motor_friction;
  Eigen::VectorXd drive_gains;
  NoiseSpec noise;
  std::vector<ContactEpisode> contacts;
};

/// Packs the ground truth into the parameter-vector layout the regressors
/// use, for self-consistency checks and error metrics.
Eigen::VectorXd ground_truth_parameters(const ChainModel& model, const GroundTruth& truth);

/**
 * @brief Synthesizes one recorded run: inverse dynamics give the joint
 *        torques and cut wrench, the transmission model turns torques into
 *        PWM, contacts and the wrench offset are added, then noise.
 *
 * The returned dataset carries the exact dq/ddq for in-memory use; file
 * writers drop them. Identical seeds give identical datasets.
 */
Dataset simulate_measurements(const ChainModel& model,
                              const GroundTruth& truth,
                              const Trajectory& trajectory,
                              std::uint64_t seed);

}  // namespace dynid

#endif  // DYNID__SIM_HPP_
