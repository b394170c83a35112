#include "dynid/model.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dynid/errors.hpp"

namespace dynid {

namespace {

using nlohmann::json;

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

Eigen::Isometry3d dh_transform(double a, double d, double alpha, double theta) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  Eigen::Matrix3d rot;
  rot << ct, -st * ca, st * sa,
         st, ct * ca, -ct * sa,
         0.0, sa, ca;
  Eigen::Isometry3d out = Eigen::Isometry3d::Identity();
  out.linear() = rot;
  out.translation() = Eigen::Vector3d(a * ct, a * st, d);
  return out;
}

const json& require_key(const json& obj, const std::string& key, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw config_error("model: missing key '" + key + "' in " + ctx);
  }
  return obj.at(key);
}

std::vector<double> number_array(const json& node, std::size_t count, const std::string& ctx) {
  if (!node.is_array() || node.size() != count) {
    throw config_error("model: " + ctx + " must be an array of " + std::to_string(count) +
                       " numbers");
  }
  std::vector<double> out;
  out.reserve(count);
  for (const auto& item : node) {
    if (!item.is_number()) {
      throw config_error("model: " + ctx + " must contain numbers only");
    }
    out.push_back(item.get<double>());
  }
  return out;
}

std::vector<int> index_array(const json& node, const std::string& ctx) {
  if (!node.is_array()) {
    throw config_error("model: " + ctx + " must be an array of joint indices");
  }
  std::vector<int> out;
  out.reserve(node.size());
  for (const auto& item : node) {
    if (!item.is_number_integer()) {
      throw config_error("model: " + ctx + " must contain integers only");
    }
    out.push_back(item.get<int>());
  }
  return out;
}

}  // namespace

void finalize_model(ChainModel& model) {
  if (model.bodies.empty()) {
    throw config_error("model: body list is empty");
  }

  model.n_q_ = 0;
  model.q_bodies_.clear();
  for (std::size_t i = 0; i < model.bodies.size(); ++i) {
    Body& body = model.bodies[i];
    for (double value : {body.a, body.d, body.alpha, body.theta0, body.locked_angle}) {
      if (!std::isfinite(value)) {
        throw config_error("model: body '" + body.name + "' has non-finite geometry");
      }
    }
    if (body.joint_type == JointType::Revolute) {
      body.q_index = model.n_q_++;
      model.q_bodies_.push_back(static_cast<int>(i));
    } else {
      body.q_index = -1;
    }
  }

  std::set<int> seen;
  for (int j : model.measured_joints) {
    if (j < 0 || j >= model.n_q_) {
      throw config_error("model: measured joint index " + std::to_string(j) +
                         " out of range, have " + std::to_string(model.n_q_) +
                         " revolute joints");
    }
    if (!seen.insert(j).second) {
      throw config_error("model: measured joint index " + std::to_string(j) + " repeated");
    }
  }

  std::set<int> coupled;
  if (model.coupling) {
    const CoupledGroup& group = *model.coupling;
    const auto size = static_cast<Eigen::Index>(group.joints.size());
    if (group.joints.empty()) {
      throw config_error("model: coupled group has no joints");
    }
    if (group.torque_map.rows() != size || group.torque_map.cols() != size) {
      std::ostringstream msg;
      msg << "model: coupling map is " << group.torque_map.rows() << "x"
          << group.torque_map.cols() << ", expected " << size << "x" << size;
      throw config_error(msg.str());
    }
    if (!group.torque_map.allFinite()) {
      throw config_error("model: coupling map has non-finite entries");
    }
    if (std::abs(group.torque_map.determinant()) <= 1e-9) {
      throw config_error("model: singular coupling matrix (|det| <= 1e-9)");
    }
    for (int j : group.joints) {
      if (!seen.count(j)) {
        throw config_error("model: coupled joint " + std::to_string(j) +
                           " is not in measured_joints");
      }
      if (!coupled.insert(j).second) {
        throw config_error("model: coupled joint " + std::to_string(j) + " repeated");
      }
    }
  }

  model.uncoupled_measured_.clear();
  for (int j : model.measured_joints) {
    if (!coupled.count(j)) {
      model.uncoupled_measured_.push_back(j);
    }
  }

  if (model.sensor.cut_body < 0 || model.sensor.cut_body >= model.n_bodies()) {
    throw config_error("model: sensor cut_body " + std::to_string(model.sensor.cut_body) +
                       " leaves no distal bodies (chain has " +
                       std::to_string(model.n_bodies()) + ")");
  }
  const Eigen::Matrix3d rot = model.sensor.transform.linear();
  if ((rot.transpose() * rot - Eigen::Matrix3d::Identity()).norm() > 1e-6) {
    throw config_error("model: sensor transform rotation is not orthonormal");
  }
  if (!model.gravity.allFinite()) {
    throw config_error("model: gravity vector has non-finite entries");
  }
}

ChainModel load_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw config_error(std::string("model parse error: ") + err.what());
  }

  ChainModel model;
  const json& bodies = require_key(doc, "bodies", "document root");
  if (!bodies.is_array() || bodies.empty()) {
    throw config_error("model: 'bodies' must be a non-empty array");
  }
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const json& node = bodies[i];
    const std::string ctx = "bodies[" + std::to_string(i) + "]";
    Body body;
    if (node.contains("name")) {
      body.name = node.at("name").get<std::string>();
    } else {
      body.name = "body" + std::to_string(i);
    }
    const auto dh = number_array(require_key(node, "dh", ctx), 4, ctx + ".dh");
    body.a = dh[0];
    body.d = dh[1];
    body.alpha = dh[2];
    body.theta0 = dh[3];

    const json& joint = require_key(node, "joint", ctx);
    const std::string type = require_key(joint, "type", ctx + ".joint").get<std::string>();
    if (type == "revolute") {
      body.joint_type = JointType::Revolute;
    } else if (type == "locked") {
      body.joint_type = JointType::Locked;
      if (joint.contains("locked_angle")) {
        body.locked_angle = joint.at("locked_angle").get<double>();
      }
    } else {
      throw config_error("model: " + ctx + ".joint.type must be 'revolute' or 'locked', got '" +
                         type + "'");
    }
    model.bodies.push_back(body);
  }

  model.measured_joints = index_array(require_key(doc, "measured_joints", "document root"),
                                      "measured_joints");

  if (doc.contains("coupled_group")) {
    const json& node = doc.at("coupled_group");
    CoupledGroup group;
    group.joints = index_array(require_key(node, "joints", "coupled_group"),
                               "coupled_group.joints");
    const auto n = group.joints.size();
    const auto entries = number_array(require_key(node, "T_transpose", "coupled_group"), n * n,
                                      "coupled_group.T_transpose");
    group.torque_map.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        group.torque_map(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            entries[r * n + c];
      }
    }
    model.coupling = group;
  }

  const json& sensor = require_key(doc, "sensor", "document root");
  model.sensor.cut_body = require_key(sensor, "cut_body", "sensor").get<int>();
  if (sensor.contains("transform")) {
    const auto entries = number_array(sensor.at("transform"), 16, "sensor.transform");
    Eigen::Matrix4d mat;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        mat(r, c) = entries[static_cast<std::size_t>(r * 4 + c)];
      }
    }
    if ((mat.row(3) - Eigen::RowVector4d(0, 0, 0, 1)).norm() > 1e-9) {
      throw config_error("model: sensor.transform last row must be [0, 0, 0, 1]");
    }
    model.sensor.transform.linear() = mat.topLeftCorner<3, 3>();
    model.sensor.transform.translation() = mat.topRightCorner<3, 1>();
  }

  if (doc.contains("gravity")) {
    const auto g = number_array(doc.at("gravity"), 3, "gravity");
    model.gravity = Eigen::Vector3d(g[0], g[1], g[2]);
  }

  finalize_model(model);
  return model;
}

ChainModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw config_error("cannot open model file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_model(buffer.str());
}

std::vector<BodyKin> frame_kinematics(const ChainModel& model,
                                      const Eigen::VectorXd& q,
                                      const Eigen::VectorXd& dq,
                                      const Eigen::VectorXd& ddq) {
  const auto n = static_cast<Eigen::Index>(model.n_q());
  if (q.size() != n || dq.size() != n || ddq.size() != n) {
    std::ostringstream msg;
    msg << "frame_kinematics: state sizes (" << q.size() << ", " << dq.size() << ", "
        << ddq.size() << ") do not match joint count " << n;
    throw std::invalid_argument(msg.str());
  }
  if (!q.allFinite() || !dq.allFinite() || !ddq.allFinite()) {
    throw std::invalid_argument("frame_kinematics: non-finite joint state");
  }

  std::vector<BodyKin> out(model.bodies.size());
  Eigen::Isometry3d pose = Eigen::Isometry3d::Identity();
  Eigen::Vector3d p_prev = Eigen::Vector3d::Zero();
  Eigen::Vector3d w_prev = Eigen::Vector3d::Zero();
  Eigen::Vector3d dw_prev = Eigen::Vector3d::Zero();
  Eigen::Vector3d v_prev = Eigen::Vector3d::Zero();
  Eigen::Vector3d a_prev = -model.gravity;  // base acceleration trick folds gravity in

  for (std::size_t i = 0; i < model.bodies.size(); ++i) {
    const Body& body = model.bodies[i];
    BodyKin& kin = out[i];
    kin.joint_origin = p_prev;
    kin.joint_axis = pose.linear().col(2);

    double theta = body.theta0;
    double rate = 0.0;
    double accel = 0.0;
    if (body.joint_type == JointType::Revolute) {
      theta += q[body.q_index];
      rate = dq[body.q_index];
      accel = ddq[body.q_index];
    } else {
      theta += body.locked_angle;
    }
    pose = pose * dh_transform(body.a, body.d, body.alpha, theta);

    const Eigen::Vector3d w = w_prev + kin.joint_axis * rate;
    const Eigen::Vector3d dw = dw_prev + kin.joint_axis * accel + w_prev.cross(kin.joint_axis) * rate;
    const Eigen::Vector3d r = pose.translation() - kin.joint_origin;
    kin.pose = pose;
    kin.omega = w;
    kin.domega = dw;
    kin.vel = v_prev + w.cross(r);
    kin.acc = a_prev + dw.cross(r) + w.cross(w.cross(r));

    p_prev = pose.translation();
    w_prev = w;
    dw_prev = dw;
    v_prev = kin.vel;
    a_prev = kin.acc;
  }
  return out;
}

Vector10d inertial_parameters(const BodyInertia& body) {
  const Eigen::Vector3d h = body.mass * body.com;
  const Eigen::Matrix3d sc = skew(body.com);
  const Eigen::Matrix3d origin = body.inertia_com - body.mass * sc * sc;
  Vector10d out;
  out << body.mass, h.x(), h.y(), h.z(),
      origin(0, 0), origin(0, 1), origin(0, 2), origin(1, 1), origin(1, 2), origin(2, 2);
  return out;
}

Eigen::VectorXd inertial_parameter_vector(const std::vector<BodyInertia>& bodies) {
  Eigen::VectorXd out(10 * static_cast<Eigen::Index>(bodies.size()));
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    out.segment<10>(static_cast<Eigen::Index>(10 * i)) = inertial_parameters(bodies[i]);
  }
  return out;
}

void require_physical(const BodyInertia& body, const std::string& label, double tol) {
  if (!(body.mass > 0.0) || !std::isfinite(body.mass)) {
    throw config_error(label + ": mass must be positive, got " + std::to_string(body.mass));
  }
  if (!body.com.allFinite() || !body.inertia_com.allFinite()) {
    throw config_error(label + ": non-finite inertial values");
  }
  if ((body.inertia_com - body.inertia_com.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw config_error(label + ": inertia tensor is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(body.inertia_com);
  if (eig.eigenvalues().minCoeff() < -tol) {
    throw config_error(label + ": inertia tensor is not positive semidefinite");
  }
}

}  // namespace dynid
