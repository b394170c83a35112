#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dynid/io.hpp"
#include "dynid/model.hpp"
#include "dynid/regressors.hpp"
#include "dynid/rnea.hpp"
#include "support.hpp"

using namespace dynid;
using namespace dynid::testing;

TEST_CASE("pendulum torque follows the closed form") {
  const ChainModel model = make_pendulum();
  BodyInertia body;
  body.mass = 1.3;
  body.com = Eigen::Vector3d(0.21, -0.04, 0.02);
  body.inertia_com << 0.004, 0.0002, -0.0001,
                      0.0002, 0.031, 0.0003,
                     -0.0001, 0.0003, 0.032;
  const Eigen::VectorXd phi = inertial_parameter_vector({body});
  const double g0 = 9.81;
  const Eigen::Vector3d h = body.mass * body.com;
  const Vector10d packed = inertial_parameters(body);
  const double izz_origin = packed(9);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd q(1), dq(1), ddq(1);
    q << 3.0 * uni(rng);
    dq << 4.0 * uni(rng);
    ddq << 6.0 * uni(rng);
    const auto kin = frame_kinematics(model, q, dq, ddq);

    const double expected =
        izz_origin * ddq(0) + g0 * (h.x() * std::cos(q(0)) - h.y() * std::sin(q(0)));
    const Eigen::MatrixXd Y = inertial_torque_regressor(model, kin);
    CHECK((Y * phi)(0) == doctest::Approx(expected).epsilon(1e-10));
    const auto dyn = rnea_inverse_dynamics(model, kin, {body});
    CHECK(dyn.tau(0) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("static pendulum wrench supports the weight") {
  const ChainModel model = make_pendulum();
  BodyInertia body;
  body.mass = 0.9;
  body.com = Eigen::Vector3d(0.17, 0.03, -0.01);
  body.inertia_com = 0.02 * Eigen::Matrix3d::Identity();
  const Eigen::VectorXd phi = inertial_parameter_vector({body});

  Eigen::VectorXd q(1), zero(1);
  q << 0.6;
  zero << 0.0;
  const auto kin = frame_kinematics(model, q, zero, zero);

  // Supported weight in world coordinates, re-expressed in the sensor frame
  // (the rotated body frame, anchored at the world origin).
  const Eigen::Vector3d f = -body.mass * model.gravity;
  const Eigen::Vector3d p = kin[0].pose * body.com;
  const Eigen::Matrix3d rot_t = kin[0].pose.linear().transpose();
  Vector6d expected;
  expected << rot_t * f, rot_t * p.cross(f);

  const Eigen::MatrixXd Ys = sensor_wrench_regressor(model, kin);
  CHECK((Ys * phi - expected).cwiseAbs().maxCoeff() < 1e-12);
  const auto dyn = rnea_inverse_dynamics(model, kin, {body});
  CHECK((dyn.cut_wrench - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("regressors agree with the recursive oracle on random chains") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 300; ++trial) {
    const ChainModel model = random_chain(rng, 2 + trial % 6);
    const auto bodies = random_inertias(rng, model.n_bodies());
    const Eigen::VectorXd phi = inertial_parameter_vector(bodies);
    Eigen::VectorXd q, dq, ddq;
    random_state(rng, model.n_q(), q, dq, ddq);
    const auto kin = frame_kinematics(model, q, dq, ddq);

    const auto dyn = rnea_inverse_dynamics(model, kin, bodies);
    const Eigen::MatrixXd Yt = inertial_torque_regressor(model, kin);
    const Eigen::MatrixXd Ys = sensor_wrench_regressor(model, kin);
    CHECK((Yt * phi - dyn.tau).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((Ys * phi - dyn.cut_wrench).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("proximal-body columns vanish") {
  std::mt19937_64 rng(11);
  const ChainModel model = load_model_file(arm_model_path());
  Eigen::VectorXd q, dq, ddq;
  random_state(rng, model.n_q(), q, dq, ddq);
  const auto kin = frame_kinematics(model, q, dq, ddq);

  const Eigen::MatrixXd Yt = inertial_torque_regressor(model, kin);
  for (int j = 0; j < model.n_q(); ++j) {
    for (int i = 0; i < model.body_of_joint(j); ++i) {
      CHECK(Yt.block(j, 10 * i, 1, 10).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  const Eigen::MatrixXd Ys = sensor_wrench_regressor(model, kin);
  for (int i = 0; i < model.sensor.cut_body; ++i) {
    CHECK(Ys.block(0, 10 * i, 6, 10).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("no motion and no gravity gives a zero torque regressor") {
  std::mt19937_64 rng(13);
  ChainModel model = random_chain(rng, 4);
  model.gravity.setZero();
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(model.n_q());
  const auto kin = frame_kinematics(model, zeros, zeros, zeros);
  const Eigen::MatrixXd Yt = inertial_torque_regressor(model, kin);
  CHECK(Yt.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("friction row values and rest behavior") {
  const Eigen::RowVector4d fwd = friction_regressor_row(2.0);
  CHECK(fwd(0) == 1.0);
  CHECK(fwd(1) == 0.0);
  CHECK(fwd(2) == 2.0);
  CHECK(fwd(3) == 0.0);

  const Eigen::RowVector4d back = friction_regressor_row(-3.0);
  CHECK(back(0) == 0.0);
  CHECK(back(1) == -1.0);
  CHECK(back(2) == 0.0);
  CHECK(back(3) == -3.0);

  CHECK(friction_regressor_row(0.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("friction torque dissipates for non-negative coefficients") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mag(0.0, 1.0);
  std::uniform_real_distribution<double> rate(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector4d coeffs(mag(rng), mag(rng), mag(rng), mag(rng));
    const double dq = rate(rng);
    const double torque = friction_regressor_row(dq) * coeffs;
    CHECK(dq * torque >= 0.0);
  }
}

TEST_CASE("coupling blocks reduce to plain friction for an identity map") {
  CoupledGroup group;
  group.joints = {0};
  group.torque_map = Eigen::MatrixXd::Identity(1, 1);
  Eigen::VectorXd dq(1), pwm(1);
  dq << 1.7;
  pwm << 42.0;
  const CouplingBlocks blocks = coupling_blocks(group, dq, pwm);
  CHECK((blocks.motor_friction - friction_regressor_row(1.7)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(blocks.gain(0, 0) == -42.0);
}

TEST_CASE("shoulder transmission maps joint rates to staggered motor rates") {
  const ChainModel model = load_model_file(arm_model_path());
  REQUIRE(model.coupling.has_value());
  const CoupledGroup& group = *model.coupling;

  Eigen::VectorXd dq(3), pwm(3);
  dq << 1.0, 0.0, 0.0;
  pwm << 5.0, -3.0, 2.0;
  const Eigen::VectorXd motor_rates = group.torque_map.transpose() * dq;
  CHECK(motor_rates(0) == doctest::Approx(1.0));
  CHECK(motor_rates(1) == doctest::Approx(-1.625));
  CHECK(motor_rates(2) == doctest::Approx(-1.625));

  Eigen::MatrixXd friction_diag = Eigen::MatrixXd::Zero(3, 12);
  for (int k = 0; k < 3; ++k) {
    friction_diag.block<1, 4>(k, 4 * k) = friction_regressor_row(motor_rates(k));
  }
  const CouplingBlocks blocks = coupling_blocks(group, dq, pwm);
  CHECK((blocks.motor_friction - group.torque_map * friction_diag)
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  const Eigen::MatrixXd expected_gain =
      -group.torque_map * pwm.asDiagonal().toDenseMatrix();
  CHECK((blocks.gain - expected_gain).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("parameter layout of the reference arm") {
  const ChainModel model = load_model_file(arm_model_path());
  const ParameterLayout layout = parameter_layout(model);
  CHECK(layout.inertial_cols == 70);
  CHECK(layout.wrench_offset_col == 70);
  CHECK(layout.coupled_friction_col == 76);
  CHECK(layout.uncoupled_friction_col == 88);
  CHECK(layout.motor_friction_col == 92);
  CHECK(layout.coupled_gain_col == 104);
  CHECK(layout.uncoupled_gain_col == 107);
  CHECK(layout.cols == 108);
  CHECK(layout.wrench_row == 4);
  CHECK(layout.rows == 10);
  CHECK(layout.body_col(6, 9) == 69);
}

TEST_CASE("parameter layout of the pendulum") {
  const ChainModel model = make_pendulum();
  const ParameterLayout layout = parameter_layout(model);
  CHECK(layout.cols == 21);
  CHECK(layout.rows == 7);
  CHECK(layout.wrench_row == 1);
}

TEST_CASE("sample block structure at rest") {
  const ChainModel model = load_model_file(arm_model_path());
  const ParameterLayout layout = parameter_layout(model);
  const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(model.n_q());
  const Eigen::VectorXd pwm = Eigen::VectorXd::Zero(model.n_measured());
  Vector6d w;
  w << 1.0, -2.0, 3.0, 0.1, -0.2, 0.3;
  const SampleBlock block = assemble_sample(model, layout, zeros, zeros, zeros, pwm, w);

  CHECK(block.rhs.head(layout.wrench_row).cwiseAbs().maxCoeff() == 0.0);
  CHECK((block.rhs.tail<6>() - w).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd offset_block =
      block.A.block(layout.wrench_row, layout.wrench_offset_col, 6, 6);
  CHECK((offset_block - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);

  // Wrench rows never touch friction or gain columns.
  const int tail_cols = layout.cols - layout.coupled_friction_col;
  CHECK(block.A.block(layout.wrench_row, layout.coupled_friction_col, 6, tail_cols)
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // At rest with zero commands every friction and gain column vanishes, so
  // the torque rows reduce to the gravity load.
  CHECK(block.A.block(0, layout.coupled_friction_col, layout.wrench_row, tail_cols)
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("prediction closes the measurement equations") {
  const ChainModel model = load_model_file(arm_model_path());
  const GroundTruth truth = load_ground_truth_file(arm_truth_path(), model);
  const ParameterLayout layout = parameter_layout(model);
  const Eigen::VectorXd phi = ground_truth_parameters(model, truth);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd q, dq, ddq;
    random_state(rng, model.n_q(), q, dq, ddq);
    const auto [pwm, wrench] = predict_measurements(model, layout, phi, q, dq, ddq);
    const SampleBlock block = assemble_sample(model, layout, q, dq, ddq, pwm, wrench);
    CHECK((block.A * phi - block.rhs).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("stacking keeps sample order") {
  const ChainModel model = make_two_link();
  const ParameterLayout layout = parameter_layout(model);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  Dataset data;
  const int n = 4;
  data.t.resize(n);
  data.q.resize(n, model.n_q());
  data.pwm.resize(n, model.n_measured());
  data.wrench.resize(n, 6);
  data.dq.resize(n, model.n_q());
  data.ddq.resize(n, model.n_q());
  for (int i = 0; i < n; ++i) {
    data.t(i) = 0.01 * i;
    for (int j = 0; j < model.n_q(); ++j) {
      data.q(i, j) = uni(rng);
      data.dq(i, j) = uni(rng);
      data.ddq(i, j) = uni(rng);
    }
    for (int j = 0; j < model.n_measured(); ++j) {
      data.pwm(i, j) = 10.0 * uni(rng);
    }
    for (int w = 0; w < 6; ++w) {
      data.wrench(i, w) = uni(rng);
    }
  }

  const auto [A, b] = stack_dataset(model, data);
  CHECK(A.rows() == n * layout.rows);
  CHECK(A.cols() == layout.cols);
  for (int i = 0; i < n; ++i) {
    const SampleBlock block = assemble_sample(
        model, layout, data.q.row(i).transpose(), data.dq.row(i).transpose(),
        data.ddq.row(i).transpose(), data.pwm.row(i).transpose(),
        data.wrench.row(i).transpose());
    CHECK((A.middleRows(i * layout.rows, layout.rows) - block.A).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((b.segment(i * layout.rows, layout.rows) - block.rhs).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("stacking requires derivatives and matching shapes") {
  const ChainModel model = make_pendulum();
  Dataset data;
  data.t.resize(2);
  data.t << 0.0, 0.01;
  data.q.resize(2, 1);
  data.q.setZero();
  data.pwm.resize(2, 1);
  data.pwm.setZero();
  data.wrench.resize(2, 6);
  data.wrench.setZero();
  CHECK_THROWS_AS(stack_dataset(model, data), std::invalid_argument);

  data.dq = data.q;
  data.ddq = data.q;
  CHECK_NOTHROW(stack_dataset(model, data));

  data.q.resize(2, 3);
  data.q.setZero();
  CHECK_THROWS_AS(stack_dataset(model, data), std::invalid_argument);
}
