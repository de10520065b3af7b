#include "gic/cli_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace gic {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
        line_start = i + 1;
      } else {
        ++col;
      }
    }
    const std::size_t line_end = text.find('\n', line_start);
    std::string context = text.substr(line_start, line_end == std::string::npos
                                                       ? std::string::npos
                                                       : line_end - line_start);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": syntax error\n  " + context);
  }
}

// Field access with the JSON path in error messages.
const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + "." + key + " is missing");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N) {
    throw ConfigError(where + " must be an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

VecX vecx(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array");
  VecX v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Mat3 mat3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(where + " must be a 3x3 array");
  Mat3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = vec<3>(j[r], where + "[" + std::to_string(r) + "]");
  return m;
}

// A gain is a scalar (times identity) or a full matrix.
Mat3 gain3(const json& j, const std::string& where) {
  return j.is_number() ? Mat3(number(j, where) * Mat3::Identity()) : mat3(j, where);
}

Mat6 gain6(const json& j, const std::string& where) {
  if (j.is_number()) return number(j, where) * Mat6::Identity();
  if (!j.is_array() || j.size() != 6) throw ConfigError(where + " must be a number or 6x6 array");
  Mat6 m;
  for (int r = 0; r < 6; ++r) m.row(r) = vec<6>(j[r], where + "[" + std::to_string(r) + "]");
  return m;
}

Pose pose(const json& j, const std::string& where) {
  return {mat3(field(j, "rotation", where), where + ".rotation"),
          vec<3>(field(j, "position", where), where + ".position")};
}

template <class F>
auto rethrow_as_config(const std::string& source, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

Trajectory parse_trajectory(const json& j) {
  const std::string where = "trajectory";
  const json& type = field(j, "type", where);
  if (type == "waypoints") {
    RegulationWaypoints w;
    const json& list = field(j, "waypoints", where);
    if (!list.is_array()) throw ConfigError("trajectory.waypoints must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = "trajectory.waypoints[" + std::to_string(i) + "]";
      w.waypoints.push_back({number(field(list[i], "t", at), at + ".t"), pose(list[i], at)});
    }
    return w;
  }
  if (type == "sinusoid") {
    SinusoidTrack s;
    s.R0 = mat3(field(j, "rotation", where), "trajectory.rotation");
    const json& axes = field(j, "axes", where);
    if (!axes.is_array() || axes.size() != 3) {
      throw ConfigError("trajectory.axes must hold x, y and z entries");
    }
    for (int i = 0; i < 3; ++i) {
      const std::string at = "trajectory.axes[" + std::to_string(i) + "]";
      const json& a = axes[i];
      s.axes[i] = {number(field(a, "offset", at), at + ".offset"),
                   number(field(a, "cos", at), at + ".cos"),
                   number(field(a, "sin", at), at + ".sin"),
                   number(field(a, "omega", at), at + ".omega")};
    }
    return s;
  }
  throw ConfigError("trajectory.type must be \"waypoints\" or \"sinusoid\"");
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

RobotModel parse_robot_model(const std::string& text, const std::string& source) {
  const json j = parse_json(text, source);
  return rethrow_as_config(source, [&] {
    RobotModel m;
    m.name = j.value("name", std::string("robot"));
    if (j.contains("gravity")) m.gravity = vec<3>(j["gravity"], "gravity");
    m.home = pose(field(j, "home", "model"), "home");
    const json& joints = field(j, "joints", "model");
    const json& links = field(j, "links", "model");
    if (!joints.is_array() || joints.empty()) throw ConfigError("joints must be a non-empty array");
    if (!links.is_array()) throw ConfigError("links must be an array");
    bool any_limits = false;
    std::vector<JointLimit> limits;
    for (std::size_t i = 0; i < joints.size(); ++i) {
      const std::string at = "joints[" + std::to_string(i) + "]";
      const json& jt = joints[i];
      const Vec3 axis = vec<3>(field(jt, "axis", at), at + ".axis");
      const Vec3 point = vec<3>(field(jt, "point", at), at + ".point");
      if (std::abs(axis.norm() - 1.0) > 1e-9) throw ConfigError(at + ".axis must be a unit vector");
      m.joint_twists.push_back(revolute_twist(axis, point));
      m.armature.push_back(jt.contains("armature") ? number(jt["armature"], at + ".armature") : 0.0);
      if (jt.contains("limits")) {
        any_limits = true;
        const auto lim = vec<2>(jt["limits"], at + ".limits");
        limits.push_back({lim(0), lim(1)});
      } else {
        limits.push_back({-std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::infinity()});
      }
    }
    if (any_limits) m.joint_limits = limits;
    for (std::size_t i = 0; i < links.size(); ++i) {
      const std::string at = "links[" + std::to_string(i) + "]";
      const json& l = links[i];
      LinkInertia li;
      li.mass = number(field(l, "mass", at), at + ".mass");
      li.com_pose = pose(field(l, "com", at), at + ".com");
      const json& I = field(l, "inertia", at);
      li.inertia = I.is_array() && I.size() == 3 && I[0].is_number()
                       ? Mat3(vec<3>(I, at + ".inertia").asDiagonal())
                       : mat3(I, at + ".inertia");
      m.links.push_back(li);
    }
    m.validate();
    return m;
  });
}

RobotModel load_robot_model(const fs::path& path) {
  return parse_robot_model(read_file(path), path.string());
}

fs::path resolve_scenario_path(const std::string& path_or_name) {
  const fs::path direct(path_or_name);
  if (fs::exists(direct)) return direct;
  const fs::path bundled = fs::path(GIC_DATA_DIR) / "scenarios" / (path_or_name + ".json");
  if (fs::exists(bundled)) return bundled;
  throw ConfigError("scenario '" + path_or_name + "' not found (not a file or bundled name)");
}

fs::path resolve_model_path(const std::string& model, const fs::path& scenario_dir) {
  std::vector<fs::path> candidates;
  const fs::path m(model);
  if (m.is_absolute()) candidates.push_back(m);
  candidates.push_back(scenario_dir / m);
  if (const char* env = std::getenv("GIC_MODEL_DIR"); env != nullptr && *env != '\0') {
    candidates.push_back(fs::path(env) / m);
  }
  candidates.push_back(fs::path(GIC_DATA_DIR) / "models" / m);
  for (const auto& c : candidates) {
    if (fs::is_regular_file(c)) return c;
  }
  throw ConfigError("robot model '" + model + "' not found");
}

Scenario parse_scenario(const std::string& text, const fs::path& scenario_dir,
                        const std::string& source) {
  const json j = parse_json(text, source);
  const std::string model_name =
      rethrow_as_config(source, [&] { return field(j, "model", "scenario").get<std::string>(); });
  RobotModel robot = load_robot_model(resolve_model_path(model_name, scenario_dir));
  return rethrow_as_config(source, [&] {
    Scenario s;
    s.name = j.value("name", fs::path(source).stem().string());
    s.robot = std::move(robot);
    s.controller = parse_controller(j.value("controller", std::string("gic1")));
    const json& g = field(j, "gains", "scenario");
    s.gains.Kp = gain3(field(g, "kp", "gains"), "gains.kp");
    s.gains.KR = gain3(field(g, "ko", "gains"), "gains.ko");
    s.gains.Kd = gain6(field(g, "kd", "gains"), "gains.kd");
    s.gains.lambda_g = g.contains("lambda_g") ? number(g["lambda_g"], "gains.lambda_g") : 0.0;
    s.duration = number(field(j, "duration", "scenario"), "duration");
    if (j.contains("dt")) s.dt = number(j["dt"], "dt");
    const json& init = field(j, "initial", "scenario");
    s.initial.q = vecx(field(init, "q", "initial"), "initial.q");
    s.initial.qdot = init.contains("qdot") ? vecx(init["qdot"], "initial.qdot")
                                           : VecX(VecX::Zero(s.initial.q.size()));
    s.trajectory = parse_trajectory(field(j, "trajectory", "scenario"));
    if (j.contains("external_wrench")) s.external_wrench = vec<6>(j["external_wrench"], "external_wrench");
    s.validate();
    return s;
  });
}

Scenario load_scenario(const fs::path& path) {
  return parse_scenario(read_file(path), path.parent_path(), path.string());
}

void apply_overrides(Scenario& s, const RunConfig& c) {
  if (c.dt) s.dt = *c.dt;
  if (c.duration) s.duration = *c.duration;
  if (c.kp) s.gains.Kp = *c.kp * Mat3::Identity();
  if (c.ko) s.gains.KR = *c.ko * Mat3::Identity();
  if (c.kd) s.gains.Kd = *c.kd * Mat6::Identity();
  if (c.lambda_g) s.gains.lambda_g = *c.lambda_g;
  s.validate();
}

// ---------------------------------------------------------------------------

std::vector<std::string> trace_csv_header(int dof) {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= dof; ++i) h.push_back("q" + std::to_string(i));
  for (int i = 1; i <= dof; ++i) h.push_back("qd" + std::to_string(i));
  for (const char* c : {"px", "py", "pz", "qw", "qx", "qy", "qz", "psi", "phi", "V_lyap", "W_lyap"}) {
    h.emplace_back(c);
  }
  for (int i = 1; i <= dof; ++i) h.push_back("tau" + std::to_string(i));
  return h;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  const auto header = trace_csv_header(trace.dof);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  std::string line;
  for (const auto& r : trace.records) {
    line = format_g17(r.t);
    const auto put = [&](double v) {
      line += ',';
      line += format_g17(v);
    };
    for (double v : r.q) put(v);
    for (double v : r.qdot) put(v);
    for (double v : r.p) put(v);
    for (double v : r.quat_wxyz) put(v);
    put(r.Psi);
    put(r.Phi);
    put(r.V);
    put(r.W);
    for (double v : r.tau) put(v);
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("failed writing trace CSV");
}

void write_trace_csv(const Trace& trace, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_trace_csv(trace, out);
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (first) {
      while (std::getline(ss, cell, ',')) t.header.push_back(cell);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != t.header.size()) {
      throw std::runtime_error("CSV row " + std::to_string(t.rows.size() + 1) + " has " +
                               std::to_string(row.size()) + " fields, header has " +
                               std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_csv(in);
}

std::string summary_table(const std::vector<std::pair<std::string, TraceSummary>>& columns,
                          bool tracking) {
  std::vector<std::pair<std::string, std::vector<double>>> rows{
      {"RMS(x-x_d)", {}}, {"RMS(y-y_d)", {}}, {"RMS(z-z_d)", {}}, {"RMS(Psi)", {}}};
  if (tracking) rows.push_back({"RMS(Phi)", {}});
  for (const auto& [name, s] : columns) {
    rows[0].second.push_back(s.rms_position.x());
    rows[1].second.push_back(s.rms_position.y());
    rows[2].second.push_back(s.rms_position.z());
    rows[3].second.push_back(s.rms_psi);
    if (tracking) rows[4].second.push_back(s.rms_phi);
  }
  std::ostringstream out;
  out << std::left << std::setw(12) << "metric";
  for (const auto& c : columns) out << std::right << std::setw(14) << c.first;
  out << '\n';
  out << std::fixed << std::setprecision(6);
  for (const auto& [label, values] : rows) {
    out << std::left << std::setw(12) << label;
    for (double v : values) out << std::right << std::setw(14) << v;
    out << '\n';
  }
  return out.str();
}

std::string summary_table(const std::vector<Trace>& traces) {
  if (traces.empty()) throw std::invalid_argument("summary table needs at least one trace");
  std::vector<std::pair<std::string, TraceSummary>> cols;
  bool tracking = false;
  for (const auto& t : traces) {
    cols.emplace_back(std::string(controller_name(t.controller)), t.summary);
    tracking = tracking || t.tracking;
  }
  return summary_table(cols, tracking);
}

}  // namespace gic
