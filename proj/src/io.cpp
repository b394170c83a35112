#include "dynid/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dynid/errors.hpp"

namespace dynid {

namespace {

using nlohmann::ordered_json;

std::string read_text_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw config_error(std::string("cannot open ") + what + " file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text, const char* what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw config_error(std::string("cannot write ") + what + " file: " + path);
  }
  out << text;
  if (!out) {
    throw config_error(std::string("write failed for ") + what + " file: " + path);
  }
}

ordered_json parse_json(const std::string& text, const char* what) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& err) {
    throw config_error(std::string(what) + " parse error: " + err.what());
  }
}

double parse_field(const std::string& cell, const std::string& path, Eigen::Index line,
                   const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    std::ostringstream msg;
    msg << path << ":" << line << ": cannot parse value '" << cell << "' in column " << column;
    throw config_error(msg.str());
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

std::vector<double> json_numbers(const ordered_json& node, std::size_t count,
                                 const std::string& ctx) {
  if (!node.is_array() || node.size() != count) {
    throw config_error(ctx + " must be an array of " + std::to_string(count) + " numbers");
  }
  std::vector<double> out;
  out.reserve(count);
  for (const auto& item : node) {
    if (!item.is_number()) {
      throw config_error(ctx + " must contain numbers only");
    }
    out.push_back(item.get<double>());
  }
  return out;
}

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  ordered_json node;
  node["rows"] = m.rows();
  node["cols"] = m.cols();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(m(r, c));
    }
  }
  node["data"] = data;
  return node;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& node, const std::string& ctx) {
  if (!node.is_object() || !node.contains("rows") || !node.contains("cols") ||
      !node.contains("data")) {
    throw config_error(ctx + " must be an object with rows/cols/data");
  }
  const auto rows = node.at("rows").get<Eigen::Index>();
  const auto cols = node.at("cols").get<Eigen::Index>();
  const auto data = json_numbers(node.at("data"), static_cast<std::size_t>(rows * cols),
                                 ctx + ".data");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const ordered_json& node, const std::string& ctx) {
  if (!node.is_array()) {
    throw config_error(ctx + " must be an array of numbers");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(node.size()));
  Eigen::Index i = 0;
  for (const auto& item : node) {
    if (!item.is_number()) {
      throw config_error(ctx + " must contain numbers only");
    }
    out[i++] = item.get<double>();
  }
  return out;
}

std::vector<double> vector_to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  const Eigen::Index n = data.rows();
  const bool labeled = !data.contact.empty();
  if (labeled && data.contact.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("write_dataset_csv: contact labels misaligned with samples");
  }

  std::string text;
  text.reserve(static_cast<std::size_t>(n) * 24 *
               static_cast<std::size_t>(1 + data.q.cols() + data.pwm.cols() + 6 + 1));
  text += "t";
  for (Eigen::Index j = 0; j < data.q.cols(); ++j) {
    text += ",q" + std::to_string(j);
  }
  for (Eigen::Index j = 0; j < data.pwm.cols(); ++j) {
    text += ",pwm" + std::to_string(j);
  }
  text += ",fx,fy,fz,mx,my,mz";
  if (labeled) {
    text += ",contact";
  }
  text += "\n";

  for (Eigen::Index s = 0; s < n; ++s) {
    text += format_number(data.t[s]);
    for (Eigen::Index j = 0; j < data.q.cols(); ++j) {
      text += ",";
      text += format_number(data.q(s, j));
    }
    for (Eigen::Index j = 0; j < data.pwm.cols(); ++j) {
      text += ",";
      text += format_number(data.pwm(s, j));
    }
    for (Eigen::Index c = 0; c < 6; ++c) {
      text += ",";
      text += format_number(data.wrench(s, c));
    }
    if (labeled) {
      text += data.contact[static_cast<std::size_t>(s)] ? ",1" : ",0";
    }
    text += "\n";
  }
  write_text_file(path, text, "dataset");
}

Dataset read_dataset_csv(const std::string& path, const ChainModel& model) {
  const std::string text = read_text_file(path, "dataset");

  std::vector<std::string> lines;
  std::string::size_type pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      eol = text.size();
    }
    if (eol > pos) {
      lines.push_back(text.substr(pos, eol - pos));
    }
    pos = eol + 1;
  }
  if (lines.empty()) {
    throw config_error(path + ": dataset is empty");
  }

  std::vector<std::string> expected{"t"};
  for (int j = 0; j < model.n_q(); ++j) {
    expected.push_back("q" + std::to_string(j));
  }
  for (int j = 0; j < model.n_measured(); ++j) {
    expected.push_back("pwm" + std::to_string(j));
  }
  for (const char* c : {"fx", "fy", "fz", "mx", "my", "mz"}) {
    expected.emplace_back(c);
  }

  const std::vector<std::string> header = split_csv_line(lines[0]);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= header.size() || header[i] != expected[i]) {
      throw config_error(path + ": dataset missing column '" + expected[i] + "'");
    }
  }
  bool labeled = false;
  if (header.size() == expected.size() + 1 && header.back() == "contact") {
    labeled = true;
  } else if (header.size() != expected.size()) {
    throw config_error(path + ": unexpected dataset column '" + header[expected.size()] + "'");
  }

  const Eigen::Index n = static_cast<Eigen::Index>(lines.size()) - 1;
  if (n < 1) {
    throw config_error(path + ": dataset has no samples");
  }
  Dataset data;
  data.t.resize(n);
  data.q.resize(n, model.n_q());
  data.pwm.resize(n, model.n_measured());
  data.wrench.resize(n, 6);
  if (labeled) {
    data.contact.assign(static_cast<std::size_t>(n), 0);
  }

  const std::size_t columns = expected.size() + (labeled ? 1 : 0);
  for (Eigen::Index s = 0; s < n; ++s) {
    const std::vector<std::string> cells = split_csv_line(lines[static_cast<std::size_t>(s) + 1]);
    if (cells.size() != columns) {
      std::ostringstream msg;
      msg << path << ":" << s + 2 << ": expected " << columns << " columns, got "
          << cells.size();
      throw config_error(msg.str());
    }
    std::size_t c = 0;
    data.t[s] = parse_field(cells[c], path, s + 2, "t");
    ++c;
    for (int j = 0; j < model.n_q(); ++j, ++c) {
      data.q(s, j) = parse_field(cells[c], path, s + 2, "q" + std::to_string(j));
    }
    for (int j = 0; j < model.n_measured(); ++j, ++c) {
      data.pwm(s, j) = parse_field(cells[c], path, s + 2, "pwm" + std::to_string(j));
    }
    for (int w = 0; w < 6; ++w, ++c) {
      data.wrench(s, w) = parse_field(cells[c], path, s + 2, expected[c]);
    }
    if (labeled) {
      data.contact[static_cast<std::size_t>(s)] =
          parse_field(cells[c], path, s + 2, "contact") != 0.0 ? 1 : 0;
    }
  }
  return data;
}

GroundTruth load_ground_truth_file(const std::string& path, const ChainModel& model) {
  const ordered_json doc = parse_json(read_text_file(path, "ground truth"), "ground truth");
  GroundTruth truth;

  if (!doc.contains("bodies") || !doc.at("bodies").is_array()) {
    throw config_error(path + ": ground truth needs a 'bodies' array");
  }
  for (std::size_t i = 0; i < doc.at("bodies").size(); ++i) {
    const auto& node = doc.at("bodies")[i];
    const std::string ctx = path + ": bodies[" + std::to_string(i) + "]";
    BodyInertia body;
    if (!node.contains("mass") || !node.at("mass").is_number()) {
      throw config_error(ctx + ".mass must be a number");
    }
    body.mass = node.at("mass").get<double>();
    const auto com = json_numbers(node.at("com"), 3, ctx + ".com");
    body.com = Eigen::Vector3d(com[0], com[1], com[2]);
    const auto inertia = json_numbers(node.at("inertia_com"), 6, ctx + ".inertia_com");
    body.inertia_com << inertia[0], inertia[1], inertia[2],
                        inertia[1], inertia[3], inertia[4],
                        inertia[2], inertia[4], inertia[5];
    require_physical(body, ctx);
    truth.bodies.push_back(body);
  }

  const auto offset = json_numbers(doc.at("wrench_offset"), 6, path + ": wrench_offset");
  truth.wrench_offset = Eigen::Map<const Vector6d>(offset.data());

  auto read_friction = [&](const ordered_json& list, const std::string& ctx) {
    std::vector<FrictionParams> out;
    if (!list.is_array()) {
      throw config_error(ctx + " must be an array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto values = json_numbers(list[i], 4, ctx + "[" + std::to_string(i) + "]");
      out.push_back({values[0], values[1], values[2], values[3]});
    }
    return out;
  };
  truth.joint_friction = read_friction(doc.at("joint_friction"), path + ": joint_friction");
  if (doc.contains("motor_friction")) {
    truth.motor_friction = read_friction(doc.at("motor_friction"), path + ": motor_friction");
  }

  const auto gains = json_numbers(doc.at("drive_gains"), truth.joint_friction.size(),
                                  path + ": drive_gains");
  truth.drive_gains = Eigen::Map<const Eigen::VectorXd>(gains.data(),
                                                        static_cast<Eigen::Index>(gains.size()));

  if (doc.contains("noise")) {
    const auto& node = doc.at("noise");
    auto field = [&](const char* key) {
      return node.contains(key) ? node.at(key).get<double>() : 0.0;
    };
    truth.noise.wrench_force = field("wrench_force");
    truth.noise.wrench_torque = field("wrench_torque");
    truth.noise.pwm = field("pwm");
    truth.noise.encoder = field("encoder");
  }

  if (doc.contains("contacts")) {
    for (std::size_t i = 0; i < doc.at("contacts").size(); ++i) {
      const auto& node = doc.at("contacts")[i];
      const std::string ctx = path + ": contacts[" + std::to_string(i) + "]";
      ContactEpisode episode;
      episode.start = node.at("start").get<double>();
      episode.end = node.at("end").get<double>();
      const auto wrench = json_numbers(node.at("wrench"), 6, ctx + ".wrench");
      episode.wrench = Eigen::Map<const Vector6d>(wrench.data());
      episode.body = node.at("body").get<int>();
      truth.contacts.push_back(episode);
    }
  }

  // surface alignment problems here, with the file name, rather than deep
  // inside the simulator
  if (truth.bodies.size() != model.bodies.size()) {
    std::ostringstream msg;
    msg << path << ": ground truth lists " << truth.bodies.size() << " bodies, model has "
        << model.bodies.size();
    throw config_error(msg.str());
  }
  if (truth.joint_friction.size() != static_cast<std::size_t>(model.n_measured())) {
    std::ostringstream msg;
    msg << path << ": joint_friction lists " << truth.joint_friction.size()
        << " joints, model measures " << model.n_measured();
    throw config_error(msg.str());
  }
  const std::size_t coupled = model.coupling ? model.coupling->joints.size() : 0;
  if (truth.motor_friction.size() != coupled) {
    std::ostringstream msg;
    msg << path << ": motor_friction lists " << truth.motor_friction.size()
        << " motors, coupled group has " << coupled;
    throw config_error(msg.str());
  }
  return truth;
}

void write_ground_truth(const std::string& path, const GroundTruth& truth) {
  ordered_json doc;
  for (const BodyInertia& body : truth.bodies) {
    ordered_json node;
    node["mass"] = body.mass;
    node["com"] = {body.com.x(), body.com.y(), body.com.z()};
    node["inertia_com"] = {body.inertia_com(0, 0), body.inertia_com(0, 1),
                           body.inertia_com(0, 2), body.inertia_com(1, 1),
                           body.inertia_com(1, 2), body.inertia_com(2, 2)};
    doc["bodies"].push_back(node);
  }
  doc["wrench_offset"] = vector_to_std(truth.wrench_offset);
  for (const FrictionParams& f : truth.joint_friction) {
    doc["joint_friction"].push_back({f.coulomb_pos, f.coulomb_neg, f.viscous_pos, f.viscous_neg});
  }
  doc["motor_friction"] = ordered_json::array();
  for (const FrictionParams& f : truth.motor_friction) {
    doc["motor_friction"].push_back({f.coulomb_pos, f.coulomb_neg, f.viscous_pos, f.viscous_neg});
  }
  doc["drive_gains"] = vector_to_std(truth.drive_gains);
  doc["noise"] = {{"wrench_force", truth.noise.wrench_force},
                  {"wrench_torque", truth.noise.wrench_torque},
                  {"pwm", truth.noise.pwm},
                  {"encoder", truth.noise.encoder}};
  doc["contacts"] = ordered_json::array();
  for (const ContactEpisode& episode : truth.contacts) {
    ordered_json node;
    node["start"] = episode.start;
    node["end"] = episode.end;
    node["wrench"] = vector_to_std(episode.wrench);
    node["body"] = episode.body;
    doc["contacts"].push_back(node);
  }
  write_text_file(path, doc.dump(2) + "\n", "ground truth");
}

void write_parameters(const std::string& path, const Eigen::VectorXd& phi) {
  ordered_json doc;
  doc["columns"] = phi.size();
  doc["phi"] = vector_to_std(phi);
  write_text_file(path, doc.dump(2) + "\n", "parameter");
}

Eigen::VectorXd read_parameters(const std::string& path) {
  const ordered_json doc = parse_json(read_text_file(path, "parameter"), "parameter");
  if (!doc.contains("phi")) {
    throw config_error(path + ": parameter file needs a 'phi' array");
  }
  const Eigen::VectorXd phi = vector_from_json(doc.at("phi"), path + ": phi");
  if (doc.contains("columns") &&
      doc.at("columns").get<Eigen::Index>() != phi.size()) {
    throw config_error(path + ": 'columns' does not match the phi length");
  }
  return phi;
}

void write_pls_model(const std::string& path, const PlsModel& model,
                     const ResidualStats& stats) {
  ordered_json doc;
  doc["latent_count"] = model.latent_count;
  doc["column_means"] = vector_to_std(model.column_means);
  doc["column_scales"] = vector_to_std(model.column_scales);
  doc["output_mean"] = model.output_mean;
  doc["weights"] = matrix_to_json(model.weights);
  doc["loadings"] = matrix_to_json(model.loadings);
  doc["output_loadings"] = vector_to_std(model.output_loadings);
  doc["coefficients"] = vector_to_std(model.coefficients);
  doc["intercept"] = model.intercept;
  doc["warnings"] = model.warnings;
  doc["residual_stats"] = {{"variances", vector_to_std(stats.variances)},
                           {"calibration_count", stats.calibration_count},
                           {"latent_count", stats.latent_count}};
  write_text_file(path, doc.dump(2) + "\n", "regression model");
}

std::pair<PlsModel, ResidualStats> read_pls_model(const std::string& path) {
  const ordered_json doc = parse_json(read_text_file(path, "regression model"),
                                      "regression model");
  PlsModel model;
  try {
    model.latent_count = doc.at("latent_count").get<int>();
    model.column_means = vector_from_json(doc.at("column_means"), path + ": column_means");
    model.column_scales = vector_from_json(doc.at("column_scales"), path + ": column_scales");
    model.output_mean = doc.at("output_mean").get<double>();
    model.weights = matrix_from_json(doc.at("weights"), path + ": weights");
    model.loadings = matrix_from_json(doc.at("loadings"), path + ": loadings");
    model.output_loadings =
        vector_from_json(doc.at("output_loadings"), path + ": output_loadings");
    model.coefficients = vector_from_json(doc.at("coefficients"), path + ": coefficients");
    model.intercept = doc.at("intercept").get<double>();
    for (const auto& w : doc.at("warnings")) {
      model.warnings.push_back(w.get<std::string>());
    }
    ResidualStats stats;
    const auto& rs = doc.at("residual_stats");
    stats.variances = vector_from_json(rs.at("variances"), path + ": variances");
    stats.calibration_count = rs.at("calibration_count").get<long>();
    stats.latent_count = rs.at("latent_count").get<int>();
    return {model, stats};
  } catch (const ordered_json::exception& err) {
    throw config_error(path + ": malformed regression model file: " + err.what());
  }
}

}  // namespace dynid
