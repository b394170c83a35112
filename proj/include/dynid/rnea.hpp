#ifndef DYNID__RNEA_HPP_
#define DYNID__RNEA_HPP_

#include <vector>

#include "dynid/model.hpp"

namespace dynid {

/// Joint torques plus the wrench crossing the sensor cut, sensor frame,
/// force before moment.
struct InverseDynamics {
  Eigen::VectorXd tau;  ///< one entry per revolute joint, chain order
  Vector6d cut_wrench = Vector6d::Zero();
};

/**
 * @brief Recursive Newton-Euler inverse dynamics over the full chain.
 *
 * Works directly on the physical per-body parameters (mass, centre of mass,
 * inertia about the centre of mass): a forward sweep is taken from @p kin,
 * the backward sweep accumulates transmitted wrenches body by body. Gravity
 * is already folded into the accelerations by frame_kinematics.
 *
 * The cut wrench is the load the proximal part applies to the distal part,
 * expressed in the sensor frame about the sensor origin.
 */
InverseDynamics rnea_inverse_dynamics(const ChainModel& model,
                                      const std::vector<BodyKin>& kin,
                                      const std::vector<BodyInertia>& bodies);

/// Moves a world-frame wrench acting about @p from so it acts about @p to.
Vector6d transport_wrench(const Vector6d& wrench,
                          const Eigen::Vector3d& from,
                          const Eigen::Vector3d& to);

/// Re-expresses a world-frame wrench about frame's origin in frame's axes.
Vector6d wrench_in_frame(const Vector6d& world_wrench,
                         const Eigen::Vector3d& acting_at,
                         const Eigen::Isometry3d& frame);

}  // namespace dynid

#endif  // DYNID__RNEA_HPP_
