#ifndef DYNID__MODEL_HPP_
#define DYNID__MODEL_HPP_

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <optional>
#include <string>
#include <vector>

namespace dynid {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Vector10d = Eigen::Matrix<double, 10, 1>;

enum class JointType { Revolute, Locked };

/**
 * @brief One link of a serial chain together with the joint that attaches it
 *        to its predecessor (or to the base for the first body).
 *
 * Frames follow the standard Denavit-Hartenberg convention: the transform
 * from the parent frame to this body's frame is
 * Rz(theta) * Tz(d) * Tx(a) * Rx(alpha), where theta = theta0 + q for a
 * revolute joint and theta = theta0 + locked_angle for a locked one. The
 * joint axis is the z axis of the parent frame, through its origin.
 */
struct Body {
  std::string name;
  double a = 0.0;       ///< link length [m]
  double d = 0.0;       ///< link offset [m]
  double alpha = 0.0;   ///< link twist [rad]
  double theta0 = 0.0;  ///< constant joint angle offset [rad]
  JointType joint_type = JointType::Revolute;
  double locked_angle = 0.0;  ///< joint angle for locked joints [rad]
  int q_index = -1;           ///< index into q for revolute joints, assigned by finalize_model
};

/**
 * @brief A set of joints driven together through a shared transmission.
 *
 * torque_map transports motor torques to joint torques,
 * joint_torques = torque_map * motor_torques, and its transpose transports
 * joint rates to motor rates, motor_rates = torque_map^T * joint_rates.
 */
struct CoupledGroup {
  std::vector<int> joints;     ///< q indices, in transmission order
  Eigen::MatrixXd torque_map;  ///< square, invertible, |joints| x |joints|
};

/// Placement of the six-axis force/torque sensor inside the chain.
struct SensorMount {
  int cut_body = 0;  ///< first body on the distal side of the cut
  Eigen::Isometry3d transform = Eigen::Isometry3d::Identity();  ///< body frame -> sensor frame
};

/**
 * @brief Kinematic description of a serial-chain arm with an in-chain
 *        force/torque sensor and PWM-measured motors.
 *
 * Bodies are listed base to tip; body i hangs from body i-1. Revolute
 * joints pick up entries of the configuration vector q in chain order,
 * locked joints hold a constant angle but their bodies still carry
 * inertial parameters.
 */
struct ChainModel {
  std::vector<Body> bodies;
  std::vector<int> measured_joints;  ///< q indices with a PWM channel, column order
  std::optional<CoupledGroup> coupling;
  SensorMount sensor;
  Eigen::Vector3d gravity{0.0, 0.0, -9.81};  ///< base-frame gravity [m/s^2]

  int n_bodies() const { return static_cast<int>(bodies.size()); }
  int n_q() const { return n_q_; }
  int n_measured() const { return static_cast<int>(measured_joints.size()); }

  /// Body index carrying revolute joint q_index.
  int body_of_joint(int q_index) const { return q_bodies_.at(q_index); }

  /// Measured joints outside the coupled group, in measured order.
  const std::vector<int>& uncoupled_measured() const { return uncoupled_measured_; }

  friend void finalize_model(ChainModel& model);

 private:
  int n_q_ = 0;
  std::vector<int> q_bodies_;
  std::vector<int> uncoupled_measured_;
};

/**
 * @brief Assigns joint indices and derived lookups, then validates the model.
 *
 * Must be called after filling the public fields by hand; load_model does it
 * automatically. Throws config_error naming the violated requirement:
 * non-empty chain, finite geometry, valid joint/body indices, invertible
 * coupling map whose joints are all measured, and a sensor cut that leaves
 * a non-empty distal part.
 */
void finalize_model(ChainModel& model);

/**
 * @brief Parses a model description document (see README for the schema)
 *        and returns a finalized ChainModel.
 *
 * Throws config_error with the offending key or parse position on malformed
 * input.
 */
ChainModel load_model(const std::string& text);

/// Reads the file at @p path and forwards to load_model.
ChainModel load_model_file(const std::string& path);

/**
 * @brief Pose and spatial motion of one body, world frame.
 *
 * acc is the linear acceleration of the body-frame origin with the base
 * acceleration set to -gravity, so gravitational loads ride along with the
 * inertial ones everywhere downstream.
 */
struct BodyKin {
  Eigen::Isometry3d pose = Eigen::Isometry3d::Identity();  ///< body frame in base coordinates
  Eigen::Vector3d joint_origin = Eigen::Vector3d::Zero();  ///< parent joint anchor
  Eigen::Vector3d joint_axis = Eigen::Vector3d::UnitZ();   ///< parent joint axis
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();         ///< angular velocity [rad/s]
  Eigen::Vector3d domega = Eigen::Vector3d::Zero();        ///< angular acceleration [rad/s^2]
  Eigen::Vector3d vel = Eigen::Vector3d::Zero();           ///< origin linear velocity [m/s]
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();           ///< origin linear acceleration [m/s^2]
};

/**
 * @brief Propagates poses, velocities and accelerations base to tip for one
 *        configuration sample.
 *
 * q, dq, ddq must have length n_q() and be finite; locked joints contribute
 * their fixed angle with zero rates.
 */
std::vector<BodyKin> frame_kinematics(const ChainModel& model,
                                      const Eigen::VectorXd& q,
                                      const Eigen::VectorXd& dq,
                                      const Eigen::VectorXd& ddq);

/**
 * @brief Mass, centre of mass and rotational inertia of one body.
 *
 * com is expressed in the body frame, inertia_com about the centre of mass
 * in body-frame axes. This is the physical (nonlinear) parameterisation;
 * inertial_parameters maps it to the 10-vector the regressors are linear in.
 */
struct BodyInertia {
  double mass = 0.0;
  Eigen::Vector3d com = Eigen::Vector3d::Zero();
  Eigen::Matrix3d inertia_com = Eigen::Matrix3d::Zero();
};

/**
 * @brief The 10 regression parameters of one body:
 *        [m, m*cx, m*cy, m*cz, Ixx, Ixy, Ixz, Iyy, Iyz, Izz],
 *        inertia taken about the body-frame origin.
 */
Vector10d inertial_parameters(const BodyInertia& body);

/// Stacks inertial_parameters for every body into one 10*n vector.
Eigen::VectorXd inertial_parameter_vector(const std::vector<BodyInertia>& bodies);

/// Throws config_error unless mass > 0 and the centre-of-mass inertia is
/// symmetric positive semidefinite (within @p tol on eigenvalues).
void require_physical(const BodyInertia& body, const std::string& label, double tol = 1e-9);

}  // namespace dynid

#endif  // DYNID__MODEL_HPP_
