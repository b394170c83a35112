#include "dynid/regressors.hpp"

#include <cmath>
#include <sstream>

#include "dynid/errors.hpp"

namespace dynid {

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

// L(v) with L(v) * [Ixx Ixy Ixz Iyy Iyz Izz]^T = I * v
Eigen::Matrix<double, 3, 6> inertia_map(const Eigen::Vector3d& v) {
  Eigen::Matrix<double, 3, 6> m;
  m << v.x(), v.y(), v.z(), 0.0, 0.0, 0.0,
       0.0, v.x(), 0.0, v.y(), v.z(), 0.0,
       0.0, 0.0, v.x(), 0.0, v.y(), v.z();
  return m;
}

// wrench of one body as a linear function of its 10 inertial parameters,
// world frame, about the body frame origin; force rows above moment rows
Eigen::Matrix<double, 6, 10> body_wrench_regressor(const BodyKin& kin) {
  const Eigen::Matrix3d rot = kin.pose.linear();
  const Eigen::Vector3d omega_b = rot.transpose() * kin.omega;
  const Eigen::Vector3d domega_b = rot.transpose() * kin.domega;

  Eigen::Matrix<double, 6, 10> out = Eigen::Matrix<double, 6, 10>::Zero();
  out.block<3, 1>(0, 0) = kin.acc;
  out.block<3, 3>(0, 1) = (skew(kin.domega) + skew(kin.omega) * skew(kin.omega)) * rot;
  out.block<3, 3>(3, 1) = -skew(kin.acc) * rot;
  out.block<3, 6>(3, 4) =
      rot * (inertia_map(domega_b) + skew(omega_b) * inertia_map(omega_b));
  return out;
}

void require_block_inputs(const ChainModel& model,
                          const Eigen::VectorXd& pwm,
                          const Vector6d& wrench) {
  if (pwm.size() != model.n_measured()) {
    std::ostringstream msg;
    msg << "assemble_sample: got " << pwm.size() << " PWM values, model has "
        << model.n_measured() << " measured joints";
    throw std::invalid_argument(msg.str());
  }
  if (!pwm.allFinite() || !wrench.allFinite()) {
    throw std::invalid_argument("assemble_sample: non-finite measurement");
  }
}

}  // namespace

ParameterLayout parameter_layout(const ChainModel& model) {
  ParameterLayout layout;
  layout.n_bodies = model.n_bodies();
  layout.n_q = model.n_q();
  if (model.coupling) {
    layout.coupled_joints = model.coupling->joints;
  }
  layout.uncoupled_joints = model.uncoupled_measured();
  layout.pwm_index.assign(model.n_q(), -1);
  for (std::size_t i = 0; i < model.measured_joints.size(); ++i) {
    layout.pwm_index[model.measured_joints[i]] = static_cast<int>(i);
  }

  const int nc = static_cast<int>(layout.coupled_joints.size());
  const int nu = static_cast<int>(layout.uncoupled_joints.size());
  layout.inertial_cols = 10 * layout.n_bodies;
  layout.wrench_offset_col = layout.inertial_cols;
  layout.coupled_friction_col = layout.wrench_offset_col + 6;
  layout.uncoupled_friction_col = layout.coupled_friction_col + 4 * nc;
  layout.motor_friction_col = layout.uncoupled_friction_col + 4 * nu;
  layout.coupled_gain_col = layout.motor_friction_col + 4 * nc;
  layout.uncoupled_gain_col = layout.coupled_gain_col + nc;
  layout.cols = layout.uncoupled_gain_col + nu;

  layout.wrench_row = nc + nu;
  layout.rows = layout.wrench_row + 6;
  return layout;
}

Eigen::MatrixXd inertial_torque_regressor(const ChainModel& model,
                                          const std::vector<BodyKin>& kin) {
  const int nb = model.n_bodies();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(model.n_q(), 10 * nb);
  for (int i = 0; i < nb; ++i) {
    const Eigen::Matrix<double, 6, 10> block = body_wrench_regressor(kin[i]);
    for (int j = 0; j < model.n_q(); ++j) {
      const int joint_body = model.body_of_joint(j);
      if (joint_body > i) {
        continue;  // joint j does not carry body i
      }
      const BodyKin& anchor = kin[joint_body];
      const Eigen::Matrix3d arm = skew(kin[i].pose.translation() - anchor.joint_origin);
      out.block<1, 10>(j, 10 * i) =
          anchor.joint_axis.transpose() * (block.bottomRows<3>() + arm * block.topRows<3>());
    }
  }
  return out;
}

Eigen::MatrixXd sensor_wrench_regressor(const ChainModel& model,
                                        const std::vector<BodyKin>& kin) {
  const int nb = model.n_bodies();
  const int cut = model.sensor.cut_body;
  const Eigen::Isometry3d frame = kin[cut].pose * model.sensor.transform;
  const Eigen::Matrix3d rot_t = frame.linear().transpose();

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(6, 10 * nb);
  for (int i = cut; i < nb; ++i) {
    const Eigen::Matrix<double, 6, 10> block = body_wrench_regressor(kin[i]);
    const Eigen::Matrix3d arm = skew(kin[i].pose.translation() - frame.translation());
    out.block<3, 10>(0, 10 * i) = rot_t * block.topRows<3>();
    out.block<3, 10>(3, 10 * i) = rot_t * (block.bottomRows<3>() + arm * block.topRows<3>());
  }
  return out;
}

Eigen::RowVector4d friction_regressor_row(double rate) {
  const double sgn = (rate > 0.0) ? 1.0 : (rate < 0.0 ? -1.0 : 0.0);
  return {std::max(sgn, 0.0), -std::max(-sgn, 0.0), std::max(rate, 0.0), -std::max(-rate, 0.0)};
}

CouplingBlocks coupling_blocks(const CoupledGroup& group,
                               const Eigen::VectorXd& joint_rates,
                               const Eigen::VectorXd& pwm) {
  const auto n = static_cast<Eigen::Index>(group.joints.size());
  if (joint_rates.size() != n || pwm.size() != n) {
    std::ostringstream msg;
    msg << "coupling_blocks: rate/pwm sizes (" << joint_rates.size() << ", " << pwm.size()
        << ") do not match group size " << n;
    throw std::invalid_argument(msg.str());
  }
  const Eigen::VectorXd motor_rates = group.torque_map.transpose() * joint_rates;
  Eigen::MatrixXd friction = Eigen::MatrixXd::Zero(n, 4 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    friction.block<1, 4>(i, 4 * i) = friction_regressor_row(motor_rates[i]);
  }
  CouplingBlocks out;
  out.motor_friction = group.torque_map * friction;
  out.gain = -group.torque_map * pwm.asDiagonal();
  return out;
}

SampleBlock assemble_sample(const ChainModel& model,
                            const ParameterLayout& layout,
                            const Eigen::VectorXd& q,
                            const Eigen::VectorXd& dq,
                            const Eigen::VectorXd& ddq,
                            const Eigen::VectorXd& pwm,
                            const Vector6d& wrench) {
  require_block_inputs(model, pwm, wrench);
  const std::vector<BodyKin> kin = frame_kinematics(model, q, dq, ddq);
  const Eigen::MatrixXd torque_reg = inertial_torque_regressor(model, kin);

  SampleBlock block;
  block.A = Eigen::MatrixXd::Zero(layout.rows, layout.cols);
  block.rhs = Eigen::VectorXd::Zero(layout.rows);

  const int nc = static_cast<int>(layout.coupled_joints.size());
  if (nc > 0) {
    const CoupledGroup& group = *model.coupling;
    Eigen::VectorXd group_rates(nc), group_pwm(nc);
    for (int i = 0; i < nc; ++i) {
      group_rates[i] = dq[group.joints[i]];
      group_pwm[i] = pwm[layout.pwm_index[group.joints[i]]];
    }
    const CouplingBlocks parts = coupling_blocks(group, group_rates, group_pwm);
    for (int i = 0; i < nc; ++i) {
      const int j = group.joints[i];
      block.A.block(i, 0, 1, layout.inertial_cols) = torque_reg.row(j);
      block.A.block<1, 4>(i, layout.coupled_friction_col + 4 * i) = friction_regressor_row(dq[j]);
    }
    block.A.block(0, layout.motor_friction_col, nc, 4 * nc) = parts.motor_friction;
    block.A.block(0, layout.coupled_gain_col, nc, nc) = parts.gain;
  }

  for (std::size_t u = 0; u < layout.uncoupled_joints.size(); ++u) {
    const int row = nc + static_cast<int>(u);
    const int j = layout.uncoupled_joints[u];
    block.A.block(row, 0, 1, layout.inertial_cols) = torque_reg.row(j);
    block.A.block<1, 4>(row, layout.uncoupled_friction_col + 4 * static_cast<int>(u)) =
        friction_regressor_row(dq[j]);
    block.A(row, layout.uncoupled_gain_col + static_cast<int>(u)) =
        -pwm[layout.pwm_index[j]];
  }

  block.A.block(layout.wrench_row, 0, 6, layout.inertial_cols) =
      sensor_wrench_regressor(model, kin);
  block.A.block<6, 6>(layout.wrench_row, layout.wrench_offset_col) =
      Eigen::Matrix<double, 6, 6>::Identity();
  block.rhs.segment<6>(layout.wrench_row) = wrench;
  return block;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> stack_dataset(const ChainModel& model,
                                                          const Dataset& data) {
  if (data.rows() == 0) {
    throw std::invalid_argument("stack_dataset: dataset is empty");
  }
  if (!data.has_derivatives()) {
    throw std::invalid_argument("stack_dataset: dataset is missing derivative estimates");
  }
  if (data.q.cols() != model.n_q() || data.pwm.cols() != model.n_measured() ||
      data.wrench.cols() != 6) {
    std::ostringstream msg;
    msg << "stack_dataset: dataset shape (q " << data.q.cols() << ", pwm " << data.pwm.cols()
        << ", wrench " << data.wrench.cols() << ") does not match model (" << model.n_q()
        << ", " << model.n_measured() << ", 6)";
    throw std::invalid_argument(msg.str());
  }

  const ParameterLayout layout = parameter_layout(model);
  const Eigen::Index n = data.rows();
  Eigen::MatrixXd big(layout.rows * n, layout.cols);
  Eigen::VectorXd rhs(layout.rows * n);
  for (Eigen::Index s = 0; s < n; ++s) {
    const SampleBlock block = assemble_sample(model, layout, data.q.row(s), data.dq.row(s),
                                              data.ddq.row(s), data.pwm.row(s),
                                              data.wrench.row(s));
    big.middleRows(layout.rows * s, layout.rows) = block.A;
    rhs.segment(layout.rows * s, layout.rows) = block.rhs;
  }
  return {std::move(big), std::move(rhs)};
}

std::pair<Eigen::VectorXd, Vector6d> predict_measurements(const ChainModel& model,
                                                          const ParameterLayout& layout,
                                                          const Eigen::VectorXd& phi,
                                                          const Eigen::VectorXd& q,
                                                          const Eigen::VectorXd& dq,
                                                          const Eigen::VectorXd& ddq) {
  if (phi.size() != layout.cols) {
    std::ostringstream msg;
    msg << "predict_measurements: parameter vector has " << phi.size() << " entries, expected "
        << layout.cols;
    throw std::invalid_argument(msg.str());
  }
  const std::vector<BodyKin> kin = frame_kinematics(model, q, dq, ddq);
  const Eigen::MatrixXd torque_reg = inertial_torque_regressor(model, kin);
  const Eigen::VectorXd inertial = phi.head(layout.inertial_cols);

  Eigen::VectorXd pwm = Eigen::VectorXd::Zero(model.n_measured());
  const int nc = static_cast<int>(layout.coupled_joints.size());
  if (nc > 0) {
    const CoupledGroup& group = *model.coupling;
    // motor torque balance: diag(gains) * pwm = M^-1 (tau + joint friction)
    // + motor friction, with M the joint-torque map
    Eigen::VectorXd joint_torque(nc);
    Eigen::VectorXd group_rates(nc);
    for (int i = 0; i < nc; ++i) {
      const int j = group.joints[i];
      joint_torque[i] = torque_reg.row(j).dot(inertial) +
                        friction_regressor_row(dq[j]).dot(
                            phi.segment<4>(layout.coupled_friction_col + 4 * i));
      group_rates[i] = dq[j];
    }
    const Eigen::VectorXd motor_rates = group.torque_map.transpose() * group_rates;
    Eigen::VectorXd motor_side = group.torque_map.partialPivLu().solve(joint_torque);
    for (int i = 0; i < nc; ++i) {
      motor_side[i] += friction_regressor_row(motor_rates[i])
                           .dot(phi.segment<4>(layout.motor_friction_col + 4 * i));
      const double gain = phi[layout.coupled_gain_col + i];
      if (std::abs(gain) < 1e-12) {
        throw numeric_error("predict_measurements: drive gain of coupled joint " +
                            std::to_string(group.joints[i]) + " is numerically zero");
      }
      pwm[layout.pwm_index[group.joints[i]]] = motor_side[i] / gain;
    }
  }
  for (std::size_t u = 0; u < layout.uncoupled_joints.size(); ++u) {
    const int j = layout.uncoupled_joints[u];
    const double torque = torque_reg.row(j).dot(inertial) +
                          friction_regressor_row(dq[j]).dot(phi.segment<4>(
                              layout.uncoupled_friction_col + 4 * static_cast<int>(u)));
    const double gain = phi[layout.uncoupled_gain_col + static_cast<int>(u)];
    if (std::abs(gain) < 1e-12) {
      throw numeric_error("predict_measurements: drive gain of joint " + std::to_string(j) +
                          " is numerically zero");
    }
    pwm[layout.pwm_index[j]] = torque / gain;
  }

  const Vector6d wrench = sensor_wrench_regressor(model, kin) * inertial +
                          phi.segment<6>(layout.wrench_offset_col);
  return {std::move(pwm), wrench};
}

}  // namespace dynid
