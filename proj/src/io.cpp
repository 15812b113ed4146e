#include "moirl/io.hpp"

#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace moirl {

const char* const kToolVersion = "0.1.0";
const char* const kMetricsCsvHeader =
    "iteration,alpha,M1,M2,traj_deviation,cost_gap_learned_w,cost_gap_true_w,wallclock_s";

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) throw IoError("write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

double parse_number(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str()) throw ConfigError("cannot parse number '" + text + "' in " + where);
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

const json& require_key(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key))
    throw ConfigError(context + ": missing required field '" + key + "'");
  return j.at(key);
}

Vec2 parse_vec2(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(context + ": expected an array of 2 numbers");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

ExperimentPreset load_environment(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("parse error in '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("'" + path + "': top level must be a JSON object");

  ExperimentPreset preset;
  EnvironmentSpec& env = preset.env;
  try {
    preset.name = j.value("name", std::string{});
    env.goal = parse_vec2(require_key(j, "goal", path), path + ": goal");
    env.start.position =
        parse_vec2(require_key(j, "start_position", path), path + ": start_position");
    env.start.velocity =
        parse_vec2(require_key(j, "start_velocity", path), path + ": start_velocity");
    env.dt = require_key(j, "dt", path).get<double>();
    env.horizon_T = require_key(j, "horizon_T", path).get<int>();

    const json& obstacles = require_key(j, "obstacles", path);
    if (!obstacles.is_array()) throw ConfigError(path + ": 'obstacles' must be an array");
    for (size_t i = 0; i < obstacles.size(); ++i) {
      const std::string ctx = path + ": obstacles[" + std::to_string(i) + "]";
      const json& ob = obstacles[i];
      ObstacleSpec spec;
      spec.center = parse_vec2(require_key(ob, "center", ctx), ctx + ".center");
      spec.radius = require_key(ob, "radius", ctx).get<double>();
      spec.activation_margin = require_key(ob, "margin", ctx).get<double>();
      env.obstacles.push_back(spec);
    }

    const json& weights = require_key(j, "weights", path);
    if (!weights.is_object()) throw ConfigError(path + ": 'weights' must be an object");
    const std::vector<std::string> names = env.feature_names();
    preset.ground_truth_weights = WeightVector::Zero(env.feature_count());
    for (size_t k = 0; k < names.size(); ++k) {
      if (!weights.contains(names[k]))
        throw ConfigError(path + ": weights: missing required field '" + names[k] + "'");
      preset.ground_truth_weights(static_cast<int>(k)) = weights.at(names[k]).get<double>();
    }
    if ((preset.ground_truth_weights.array() < 0.0).any())
      throw ConfigError(path + ": weights must be nonnegative");

    preset.goal_tolerance = j.value("goal_tolerance", 0.05);
    if (j.contains("alternative_starts")) {
      const json& alts = j.at("alternative_starts");
      if (!alts.is_array()) throw ConfigError(path + ": 'alternative_starts' must be an array");
      for (size_t i = 0; i < alts.size(); ++i) {
        State s;
        s.position = parse_vec2(alts[i], path + ": alternative_starts[" + std::to_string(i) + "]");
        preset.alternative_starts.push_back(s);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }

  try {
    env.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
  return preset;
}

void save_environment(const ExperimentPreset& preset, const std::string& path) {
  json j;
  if (!preset.name.empty()) j["name"] = preset.name;
  j["goal"] = {preset.env.goal.x(), preset.env.goal.y()};
  j["start_position"] = {preset.env.start.position.x(), preset.env.start.position.y()};
  j["start_velocity"] = {preset.env.start.velocity.x(), preset.env.start.velocity.y()};
  j["dt"] = preset.env.dt;
  j["horizon_T"] = preset.env.horizon_T;
  j["obstacles"] = json::array();
  for (const auto& ob : preset.env.obstacles)
    j["obstacles"].push_back({{"center", {ob.center.x(), ob.center.y()}},
                              {"radius", ob.radius},
                              {"margin", ob.activation_margin}});
  j["weights"] = json::object();
  const auto names = preset.env.feature_names();
  for (size_t k = 0; k < names.size(); ++k)
    j["weights"][names[k]] = preset.ground_truth_weights(static_cast<int>(k));
  j["goal_tolerance"] = preset.goal_tolerance;
  j["alternative_starts"] = json::array();
  for (const auto& s : preset.alternative_starts)
    j["alternative_starts"].push_back({s.position.x(), s.position.y()});
  atomic_write(path, j.dump(2) + "\n");
}

void save_trajectory_csv(const Trajectory& tau, const std::string& path) {
  std::ostringstream out;
  out << "# dt " << format_double(tau.dt) << "\n";
  out << "t,px,py,vx,vy,ux,uy\n";
  for (size_t t = 0; t < tau.states.size(); ++t) {
    const State& s = tau.states[t];
    out << t << ',' << format_double(s.position.x()) << ',' << format_double(s.position.y())
        << ',' << format_double(s.velocity.x()) << ',' << format_double(s.velocity.y()) << ',';
    if (t < tau.controls.size())
      out << format_double(tau.controls[t].force.x()) << ','
          << format_double(tau.controls[t].force.y());
    else
      out << ',';
    out << '\n';
  }
  atomic_write(path, out.str());
}

Trajectory load_trajectory_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  Trajectory tau;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# dt ", 0) == 0) {
      tau.dt = parse_number(line.substr(5), path);
      continue;
    }
    if (!header_seen) {  // column header
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 7)
      throw ConfigError("'" + path + "': expected 7 columns, got " +
                        std::to_string(fields.size()));
    State s;
    s.position << parse_number(fields[1], path), parse_number(fields[2], path);
    s.velocity << parse_number(fields[3], path), parse_number(fields[4], path);
    tau.states.push_back(s);
    if (!fields[5].empty() && !fields[6].empty()) {
      Control u;
      u.force << parse_number(fields[5], path), parse_number(fields[6], path);
      tau.controls.push_back(u);
    }
  }
  try {
    tau.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
  return tau;
}

void save_weights_csv(const WeightVector& w, const std::vector<std::string>& names,
                      const std::string& path) {
  if (w.size() != static_cast<Eigen::Index>(names.size()))
    throw std::invalid_argument("save_weights_csv: name/weight count mismatch");
  std::ostringstream out;
  out << "feature,weight\n";
  for (size_t k = 0; k < names.size(); ++k)
    out << names[k] << ',' << format_double(w(static_cast<int>(k))) << '\n';
  atomic_write(path, out.str());
}

WeightVector load_weights_csv(const std::string& path,
                              const std::vector<std::string>& expected_names) {
  std::istringstream in(read_file(path));
  std::map<std::string, double> entries;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 2)
      throw ConfigError("'" + path + "': expected 2 columns, got " +
                        std::to_string(fields.size()));
    entries[fields[0]] = parse_number(fields[1], path);
  }
  WeightVector w(expected_names.size());
  for (size_t k = 0; k < expected_names.size(); ++k) {
    const auto it = entries.find(expected_names[k]);
    if (it == entries.end())
      throw ConfigError("'" + path + "': missing weight for feature '" + expected_names[k] + "'");
    w(static_cast<int>(k)) = it->second;
    entries.erase(it);
  }
  if (!entries.empty())
    throw ConfigError("'" + path + "': unknown feature '" + entries.begin()->first + "'");
  if ((w.array() < 0.0).any())
    throw ConfigError("'" + path + "': weights must be nonnegative");
  return w;
}

void save_metrics_csv(const std::vector<IterationRecord>& log, const std::string& path) {
  std::ostringstream out;
  out << kMetricsCsvHeader << '\n';
  for (const auto& rec : log) {
    out << rec.iteration << ',' << format_double(rec.alpha) << ',' << format_double(rec.m1) << ','
        << format_double(rec.m2) << ',' << format_double(rec.traj_deviation) << ','
        << format_double(rec.cost_gap_learned_w) << ',' << format_double(rec.cost_gap_true_w)
        << ',' << format_double(rec.wallclock_s) << '\n';
  }
  atomic_write(path, out.str());
}

void save_samples_csv(const std::vector<Trajectory>& samples, const std::string& path) {
  std::ostringstream out;
  out << "sample,t,px,py,vx,vy,ux,uy\n";
  for (size_t i = 0; i < samples.size(); ++i) {
    const Trajectory& tau = samples[i];
    for (size_t t = 0; t < tau.states.size(); ++t) {
      const State& s = tau.states[t];
      out << i << ',' << t << ',' << format_double(s.position.x()) << ','
          << format_double(s.position.y()) << ',' << format_double(s.velocity.x()) << ','
          << format_double(s.velocity.y()) << ',';
      if (t < tau.controls.size())
        out << format_double(tau.controls[t].force.x()) << ','
            << format_double(tau.controls[t].force.y());
      else
        out << ',';
      out << '\n';
    }
  }
  atomic_write(path, out.str());
}

std::string report_to_json(const EvaluationReport& report, const std::string& env_file,
                           const std::string& weights_file) {
  json j;
  j["env_file"] = env_file;
  j["weights_file"] = weights_file;
  j["ratio"] = report.ratio;
  j["alternatives_reached_collision_free"] = report.alternatives_reached_collision_free;
  j["wallclock_s"] = report.wallclock_s;
  j["starts"] = json::array();
  for (const auto& row : report.outcomes) {
    json r;
    r["label"] = row.label;
    r["start"] = {row.start.position.x(), row.start.position.y()};
    r["solver_failed"] = row.solver_failed;
    r["reached_goal"] = row.reached_goal;
    r["collided"] = row.collided;
    r["cost_under_w_star"] = row.cost_under_w_star;
    r["cost_under_learned_w"] = row.cost_under_learned_w;
    j["starts"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::string format_report_table(const EvaluationReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-10s %-9s %-9s %-14s %-14s\n", "start", "reached",
                "collided", "cost(w*)", "cost(learned)");
  out << buf;
  for (const auto& row : report.outcomes) {
    std::snprintf(buf, sizeof(buf), "%-10s %-9s %-9s %-14.6g %-14.6g\n", row.label.c_str(),
                  row.solver_failed ? "fail" : (row.reached_goal ? "yes" : "no"),
                  row.collided ? "yes" : "no", row.cost_under_w_star, row.cost_under_learned_w);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf), "ratio w*'Phi(learned)/w*'Phi*: %.6g\n", report.ratio);
  out << buf;
  return out.str();
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
  json j;
  j["tool_version"] = manifest.tool_version;
  j["command"] = manifest.command;
  if (!manifest.preset_name.empty()) j["preset"] = manifest.preset_name;
  j["started_at"] = manifest.started_at;
  j["finished_at"] = manifest.finished_at;
  if (!manifest.termination_reason.empty())
    j["termination_reason"] = manifest.termination_reason;
  if (manifest.outer_iterations > 0) j["outer_iterations"] = manifest.outer_iterations;
  j["config"] = json::object();
  for (const auto& [k, v] : manifest.config) j["config"][k] = v;
  j["outputs"] = json::object();
  for (const auto& [k, v] : manifest.outputs) j["outputs"][k] = v;
  atomic_write(path, j.dump(2) + "\n");
}

std::string current_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace moirl
