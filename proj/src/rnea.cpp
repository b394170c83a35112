#include "dynid/rnea.hpp"

#include <sstream>

namespace dynid {

Vector6d transport_wrench(const Vector6d& wrench,
                          const Eigen::Vector3d& from,
                          const Eigen::Vector3d& to) {
  Vector6d out = wrench;
  out.tail<3>() += (from - to).cross(wrench.head<3>());
  return out;
}

Vector6d wrench_in_frame(const Vector6d& world_wrench,
                         const Eigen::Vector3d& acting_at,
                         const Eigen::Isometry3d& frame) {
  const Vector6d at_origin = transport_wrench(world_wrench, acting_at, frame.translation());
  Vector6d out;
  out.head<3>() = frame.linear().transpose() * at_origin.head<3>();
  out.tail<3>() = frame.linear().transpose() * at_origin.tail<3>();
  return out;
}

InverseDynamics rnea_inverse_dynamics(const ChainModel& model,
                                      const std::vector<BodyKin>& kin,
                                      const std::vector<BodyInertia>& bodies) {
  const std::size_t n = model.bodies.size();
  if (kin.size() != n || bodies.size() != n) {
    std::ostringstream msg;
    msg << "rnea_inverse_dynamics: got " << kin.size() << " kinematic and " << bodies.size()
        << " inertial entries for a chain of " << n << " bodies";
    throw std::invalid_argument(msg.str());
  }

  // net inertial wrench of each body, world frame, about its centre of mass
  std::vector<Eigen::Vector3d> com(n), f_net(n), n_net(n);
  for (std::size_t i = 0; i < n; ++i) {
    const BodyKin& k = kin[i];
    const Eigen::Vector3d c = k.pose.linear() * bodies[i].com;
    com[i] = k.pose.translation() + c;
    const Eigen::Vector3d a_com = k.acc + k.domega.cross(c) + k.omega.cross(k.omega.cross(c));
    f_net[i] = bodies[i].mass * a_com;
    const Eigen::Matrix3d inertia =
        k.pose.linear() * bodies[i].inertia_com * k.pose.linear().transpose();
    n_net[i] = inertia * k.domega + k.omega.cross(inertia * k.omega);
  }

  InverseDynamics out;
  out.tau = Eigen::VectorXd::Zero(model.n_q());

  // backward sweep: wrench each body receives from its parent, taken about
  // the parent joint anchor
  Eigen::Vector3d f_child = Eigen::Vector3d::Zero();
  Eigen::Vector3d n_child = Eigen::Vector3d::Zero();  // about kin[i + 1].joint_origin
  for (std::size_t idx = n; idx-- > 0;) {
    const BodyKin& k = kin[idx];
    Eigen::Vector3d force = f_net[idx] + f_child;
    Eigen::Vector3d moment = n_net[idx] + (com[idx] - k.joint_origin).cross(f_net[idx]) + n_child;
    if (idx + 1 < n) {
      moment += (kin[idx + 1].joint_origin - k.joint_origin).cross(f_child);
    }

    const Body& body = model.bodies[idx];
    if (body.joint_type == JointType::Revolute) {
      out.tau[body.q_index] = k.joint_axis.dot(moment);
    }
    if (static_cast<int>(idx) == model.sensor.cut_body) {
      Vector6d world;
      world << force, moment;
      const Eigen::Isometry3d sensor_frame = k.pose * model.sensor.transform;
      out.cut_wrench = wrench_in_frame(world, k.joint_origin, sensor_frame);
    }
    f_child = force;
    n_child = moment;
  }
  return out;
}

}  // namespace dynid
