#include "dynid/sim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dynid/errors.hpp"
#include "dynid/regressors.hpp"
#include "dynid/rnea.hpp"

namespace dynid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_truth(const ChainModel& model, const GroundTruth& truth) {
  if (truth.bodies.size() != model.bodies.size()) {
    std::ostringstream msg;
    msg << "ground truth covers " << truth.bodies.size() << " bodies, model has "
        << model.bodies.size();
    throw config_error(msg.str());
  }
  const auto measured = static_cast<std::size_t>(model.n_measured());
  if (truth.joint_friction.size() != measured ||
      truth.drive_gains.size() != static_cast<Eigen::Index>(measured)) {
    throw config_error("ground truth friction/gain lists must align with measured joints");
  }
  const std::size_t coupled = model.coupling ? model.coupling->joints.size() : 0;
  if (truth.motor_friction.size() != coupled) {
    throw config_error("ground truth motor friction list must align with the coupled group");
  }
  for (Eigen::Index i = 0; i < truth.drive_gains.size(); ++i) {
    if (std::abs(truth.drive_gains[i]) < 1e-9) {
      throw config_error("ground truth drive gain " + std::to_string(i) + " is zero");
    }
  }
  for (const ContactEpisode& episode : truth.contacts) {
    if (episode.body < 0 || episode.body >= model.n_bodies()) {
      throw config_error("contact episode body " + std::to_string(episode.body) +
                         " out of range");
    }
    if (!(episode.end >= episode.start)) {
      throw config_error("contact episode ends before it starts");
    }
  }
}

}  // namespace

Eigen::Index Trajectory::samples() const {
  return static_cast<Eigen::Index>(std::llround(duration * rate));
}

double Trajectory::q(int joint, double t) const {
  double value = 0.0;
  for (const SineComponent& c : joints[joint]) {
    value += c.amplitude * std::sin(kTwoPi * c.frequency * t + c.phase);
  }
  return value;
}

double Trajectory::dq(int joint, double t) const {
  double value = 0.0;
  for (const SineComponent& c : joints[joint]) {
    value += c.amplitude * kTwoPi * c.frequency * std::cos(kTwoPi * c.frequency * t + c.phase);
  }
  return value;
}

double Trajectory::ddq(int joint, double t) const {
  double value = 0.0;
  for (const SineComponent& c : joints[joint]) {
    const double w = kTwoPi * c.frequency;
    value -= c.amplitude * w * w * std::sin(w * t + c.phase);
  }
  return value;
}

Trajectory generate_trajectory(int n_joints,
                               double duration,
                               double rate,
                               std::uint64_t seed,
                               const TrajectoryLimits& limits) {
  if (n_joints < 0) {
    throw std::invalid_argument("generate_trajectory: negative joint count");
  }
  if (!(duration > 0.0) || !(rate > 0.0) || duration * rate < 10.0) {
    throw std::invalid_argument("generate_trajectory: need duration * rate >= 10 samples");
  }
  if (!(limits.amplitude > 0.0) || !(limits.min_frequency > 0.0) ||
      limits.max_frequency < limits.min_frequency) {
    throw std::invalid_argument("generate_trajectory: bad amplitude/frequency limits");
  }
  if (limits.max_frequency >= 0.5 * rate) {
    throw std::invalid_argument("generate_trajectory: max frequency at or above Nyquist");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> share(0.3, 1.0);
  std::uniform_real_distribution<double> freq(limits.min_frequency, limits.max_frequency);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);

  Trajectory traj;
  traj.duration = duration;
  traj.rate = rate;
  traj.joints.resize(n_joints);
  for (auto& components : traj.joints) {
    std::array<double, 3> raw{share(rng), share(rng), share(rng)};
    const double total = raw[0] + raw[1] + raw[2];
    for (int k = 0; k < 3; ++k) {
      components[k].amplitude = limits.amplitude * raw[k] / total;
      components[k].frequency = freq(rng);
      components[k].phase = phase(rng);
    }
  }
  return traj;
}

Eigen::VectorXd ground_truth_parameters(const ChainModel& model, const GroundTruth& truth) {
  validate_truth(model, truth);
  const ParameterLayout layout = parameter_layout(model);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(layout.cols);
  phi.head(layout.inertial_cols) = inertial_parameter_vector(truth.bodies);
  phi.segment<6>(layout.wrench_offset_col) = truth.wrench_offset;
  for (std::size_t i = 0; i < layout.coupled_joints.size(); ++i) {
    const int pwm = layout.pwm_index[layout.coupled_joints[i]];
    phi.segment<4>(layout.coupled_friction_col + 4 * static_cast<int>(i)) =
        truth.joint_friction[pwm].as_vector();
    phi.segment<4>(layout.motor_friction_col + 4 * static_cast<int>(i)) =
        truth.motor_friction[i].as_vector();
    phi[layout.coupled_gain_col + static_cast<int>(i)] = truth.drive_gains[pwm];
  }
  for (std::size_t u = 0; u < layout.uncoupled_joints.size(); ++u) {
    const int pwm = layout.pwm_index[layout.uncoupled_joints[u]];
    phi.segment<4>(layout.uncoupled_friction_col + 4 * static_cast<int>(u)) =
        truth.joint_friction[pwm].as_vector();
    phi[layout.uncoupled_gain_col + static_cast<int>(u)] = truth.drive_gains[pwm];
  }
  return phi;
}

Dataset simulate_measurements(const ChainModel& model,
                              const GroundTruth& truth,
                              const Trajectory& trajectory,
                              std::uint64_t seed) {
  validate_truth(model, truth);
  if (static_cast<int>(trajectory.joints.size()) != model.n_q()) {
    std::ostringstream msg;
    msg << "simulate_measurements: trajectory drives " << trajectory.joints.size()
        << " joints, model has " << model.n_q();
    throw std::invalid_argument(msg.str());
  }
  for (const BodyInertia& body : truth.bodies) {
    require_physical(body, "ground truth body");
  }

  const Eigen::Index n = trajectory.samples();
  const int nq = model.n_q();
  const int measured = model.n_measured();
  const ParameterLayout layout = parameter_layout(model);
  const int nc = static_cast<int>(layout.coupled_joints.size());

  Dataset data;
  data.t.resize(n);
  data.q.resize(n, nq);
  data.dq.resize(n, nq);
  data.ddq.resize(n, nq);
  data.pwm.resize(n, measured);
  data.wrench.resize(n, 6);
  data.contact.assign(static_cast<std::size_t>(n), 0);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::VectorXd q(nq), dq(nq), ddq(nq);
  for (Eigen::Index s = 0; s < n; ++s) {
    const double t = static_cast<double>(s) / trajectory.rate;
    data.t[s] = t;
    for (int j = 0; j < nq; ++j) {
      q[j] = trajectory.q(j, t);
      dq[j] = trajectory.dq(j, t);
      ddq[j] = trajectory.ddq(j, t);
    }

    const std::vector<BodyKin> kin = frame_kinematics(model, q, dq, ddq);
    InverseDynamics dynamics = rnea_inverse_dynamics(model, kin, truth.bodies);
    Vector6d wrench = dynamics.cut_wrench;

    bool touched = false;
    for (const ContactEpisode& episode : truth.contacts) {
      if (t < episode.start || t > episode.end) {
        continue;
      }
      touched = true;
      const Eigen::Vector3d at = kin[episode.body].pose.translation();
      const Eigen::Vector3d force = episode.wrench.head<3>();
      const Eigen::Vector3d moment = episode.wrench.tail<3>();
      if (episode.body >= model.sensor.cut_body) {
        const Eigen::Isometry3d frame =
            kin[model.sensor.cut_body].pose * model.sensor.transform;
        wrench -= wrench_in_frame(episode.wrench, at, frame);
      }
      for (int j = 0; j < nq; ++j) {
        const int body = model.body_of_joint(j);
        if (body > episode.body) {
          continue;
        }
        const BodyKin& anchor = kin[body];
        dynamics.tau[j] -=
            anchor.joint_axis.dot(moment + (at - anchor.joint_origin).cross(force));
      }
    }
    data.contact[static_cast<std::size_t>(s)] = touched ? 1 : 0;

    // transmission model turns delivered torque into PWM channels
    Eigen::VectorXd pwm = Eigen::VectorXd::Zero(measured);
    if (nc > 0) {
      const CoupledGroup& group = *model.coupling;
      Eigen::VectorXd load(nc), rates(nc);
      for (int i = 0; i < nc; ++i) {
        const int j = group.joints[i];
        load[i] = dynamics.tau[j] +
                  friction_regressor_row(dq[j])
                      .dot(truth.joint_friction[layout.pwm_index[j]].as_vector());
        rates[i] = dq[j];
      }
      Eigen::VectorXd motor_side = group.torque_map.partialPivLu().solve(load);
      const Eigen::VectorXd motor_rates = group.torque_map.transpose() * rates;
      for (int i = 0; i < nc; ++i) {
        motor_side[i] +=
            friction_regressor_row(motor_rates[i]).dot(truth.motor_friction[i].as_vector());
        const int pwm_col = layout.pwm_index[group.joints[i]];
        pwm[pwm_col] = motor_side[i] / truth.drive_gains[pwm_col];
      }
    }
    for (int j : layout.uncoupled_joints) {
      const int pwm_col = layout.pwm_index[j];
      const double torque = dynamics.tau[j] +
                            friction_regressor_row(dq[j])
                                .dot(truth.joint_friction[pwm_col].as_vector());
      pwm[pwm_col] = torque / truth.drive_gains[pwm_col];
    }

    wrench += truth.wrench_offset;

    // one draw per channel every sample keeps the stream layout fixed
    for (int j = 0; j < nq; ++j) {
      data.q(s, j) = q[j] + truth.noise.encoder * gauss(rng);
    }
    for (int c = 0; c < measured; ++c) {
      data.pwm(s, c) = pwm[c] + truth.noise.pwm * gauss(rng);
    }
    for (int c = 0; c < 3; ++c) {
      data.wrench(s, c) = wrench[c] + truth.noise.wrench_force * gauss(rng);
    }
    for (int c = 3; c < 6; ++c) {
      data.wrench(s, c) = wrench[c] + truth.noise.wrench_torque * gauss(rng);
    }
    data.dq.row(s) = dq;
    data.ddq.row(s) = ddq;
  }
  return data;
}

}  // namespace dynid
