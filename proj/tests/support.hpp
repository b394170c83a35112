#ifndef DYNID_TESTS_SUPPORT_HPP_
#define DYNID_TESTS_SUPPORT_HPP_

// Shared fixtures: hand-built chains with known behavior and seeded random
// draws of geometry, inertia and motion state used by the oracle checks.

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dynid/model.hpp"

namespace dynid::testing {

inline std::string models_dir() {
#ifdef DYNID_MODELS_DIR
  return DYNID_MODELS_DIR;
#else
  return "models";
#endif
}

inline std::string arm_model_path() { return models_dir() + "/icub_like_arm.json"; }
inline std::string arm_truth_path() { return models_dir() + "/icub_like_arm_truth.json"; }
inline std::string arm_contact_truth_path() {
  return models_dir() + "/icub_like_arm_truth_contact.json";
}
inline std::string pendulum_model_path() { return models_dir() + "/pendulum.json"; }
inline std::string pendulum_truth_path() { return models_dir() + "/pendulum_truth.json"; }

/// Single revolute link, base-mounted sensor, gravity along -y so the swing
/// plane carries the load.
inline ChainModel make_pendulum() {
  ChainModel model;
  Body rod;
  rod.name = "rod";
  rod.joint_type = JointType::Revolute;
  model.bodies.push_back(rod);
  model.measured_joints = {0};
  model.sensor.cut_body = 0;
  model.sensor.transform.setIdentity();
  model.gravity = Eigen::Vector3d(0.0, -9.81, 0.0);
  finalize_model(model);
  return model;
}

/// Two revolute links with offsets, sensor between them.
inline ChainModel make_two_link() {
  ChainModel model;
  Body first;
  first.name = "upper";
  first.a = 0.2;
  first.d = 0.05;
  first.alpha = -1.5707963267948966;
  first.joint_type = JointType::Revolute;
  Body second;
  second.name = "lower";
  second.a = 0.25;
  second.d = 0.0;
  second.alpha = 0.4;
  second.theta0 = 0.3;
  second.joint_type = JointType::Revolute;
  model.bodies = {first, second};
  model.measured_joints = {0, 1};
  model.sensor.cut_body = 1;
  model.sensor.transform.setIdentity();
  model.sensor.transform.translation() = Eigen::Vector3d(0.02, -0.01, 0.03);
  finalize_model(model);
  return model;
}

/// Uniformly drawn chain geometry: mixed revolute/locked joints, a random
/// sensor cut and gravity tilt. At least min_revolute joints stay revolute.
inline ChainModel random_chain(std::mt19937_64& rng, int n_bodies, int min_revolute = 1) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ChainModel model;
  int revolute = 0;
  for (int i = 0; i < n_bodies; ++i) {
    Body body;
    body.name = "b" + std::to_string(i);
    body.a = 0.3 * uni(rng);
    body.d = 0.3 * uni(rng);
    body.alpha = 1.5 * uni(rng);
    body.theta0 = 1.5 * uni(rng);
    const bool lock = revolute + (n_bodies - i) > min_revolute && uni(rng) < -0.4;
    if (lock) {
      body.joint_type = JointType::Locked;
      body.locked_angle = uni(rng);
    } else {
      body.joint_type = JointType::Revolute;
      ++revolute;
    }
    model.bodies.push_back(body);
  }
  for (int j = 0; j < revolute; ++j) {
    model.measured_joints.push_back(j);
  }
  std::uniform_int_distribution<int> cut(0, n_bodies - 1);
  model.sensor.cut_body = cut(rng);
  model.sensor.transform.setIdentity();
  model.sensor.transform.translation() =
      Eigen::Vector3d(0.05 * uni(rng), 0.05 * uni(rng), 0.05 * uni(rng));
  Eigen::Vector3d axis(uni(rng), uni(rng), uni(rng));
  if (axis.norm() > 1e-6) {
    model.sensor.transform.rotate(Eigen::AngleAxisd(uni(rng), axis.normalized()));
  }
  model.gravity = Eigen::Vector3d(2.0 * uni(rng), 2.0 * uni(rng), -9.81);
  finalize_model(model);
  return model;
}

/// Physically consistent inertia draw: positive mass, bounded center of
/// mass, inertia from a random positive definite square.
inline BodyInertia random_inertia(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  BodyInertia body;
  body.mass = 0.1 + 2.9 * std::abs(uni(rng));
  body.com = Eigen::Vector3d(0.15 * uni(rng), 0.15 * uni(rng), 0.15 * uni(rng));
  Eigen::Matrix3d root;
  root << uni(rng), uni(rng), uni(rng),
          uni(rng), uni(rng), uni(rng),
          uni(rng), uni(rng), uni(rng);
  body.inertia_com = 0.01 * (root * root.transpose()) +
                     1e-4 * Eigen::Matrix3d::Identity();
  return body;
}

inline std::vector<BodyInertia> random_inertias(std::mt19937_64& rng, int n_bodies) {
  std::vector<BodyInertia> bodies;
  bodies.reserve(n_bodies);
  for (int i = 0; i < n_bodies; ++i) {
    bodies.push_back(random_inertia(rng));
  }
  return bodies;
}

/// Random joint state within friendly magnitudes.
inline void random_state(std::mt19937_64& rng, int n_q, Eigen::VectorXd& q,
                         Eigen::VectorXd& dq, Eigen::VectorXd& ddq) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  q.resize(n_q);
  dq.resize(n_q);
  ddq.resize(n_q);
  for (int j = 0; j < n_q; ++j) {
    q(j) = 2.0 * uni(rng);
    dq(j) = 3.0 * uni(rng);
    ddq(j) = 5.0 * uni(rng);
  }
}

}  // namespace dynid::testing

#endif  // DYNID_TESTS_SUPPORT_HPP_
