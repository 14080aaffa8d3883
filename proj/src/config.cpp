#include "polar_iga/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace polar_iga {

namespace {

void validate(const RunConfig& config) {
  if (config.problem != "pacman" && config.problem != "lshape") {
    throw ConfigError("config: problem must be 'pacman' or 'lshape'");
  }
  if (config.degree < 1) throw ConfigError("config: degree must be >= 1");
  if (config.levels.empty()) throw ConfigError("config: levels must be a nonempty increasing list");
  for (size_t i = 0; i < config.levels.size(); ++i) {
    if (config.levels[i] < 2) throw ConfigError("config: every level needs at least 2 breakpoints");
    if (i > 0 && config.levels[i] <= config.levels[i - 1]) {
      throw ConfigError("config: levels must be strictly increasing");
    }
  }
  if (config.grading == GradingMode::explicit_value &&
      (!(config.grading_value > 0.0) || config.grading_value > 1.0)) {
    throw ConfigError("config: an explicit grading value must lie in (0, 1]");
  }
  if (config.quadrature_nodes < 1 || config.quadrature_nodes > 32) {
    throw ConfigError("config: quadrature_nodes must lie in [1, 32]");
  }
}

void set_grading(RunConfig& config, const std::string& word) {
  if (word == "uniform") {
    config.grading = GradingMode::uniform;
  } else if (word == "auto") {
    config.grading = GradingMode::automatic;
  } else {
    throw ConfigError("config: grading must be 'uniform', 'auto' or a number in (0, 1]");
  }
}

}  // namespace

ManufacturedProblem problem_by_name(const std::string& name) {
  if (name == "pacman") return pacman_problem();
  if (name == "lshape") return lshape_problem();
  throw ConfigError("config: unknown problem '" + name + "'");
}

RunConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig config;
  try {
    config.problem = j.at("problem").get<std::string>();
    config.levels = j.at("levels").get<std::vector<int>>();
    if (j.contains("degree")) config.degree = j.at("degree").get<int>();
    if (j.contains("quadrature_nodes")) config.quadrature_nodes = j.at("quadrature_nodes").get<int>();
    if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("grading")) {
      const auto& g = j.at("grading");
      if (g.is_string()) {
        set_grading(config, g.get<std::string>());
      } else if (g.is_number()) {
        config.grading = GradingMode::explicit_value;
        config.grading_value = g.get<double>();
      } else {
        throw ConfigError("config: grading must be 'uniform', 'auto' or a number in (0, 1]");
      }
    }
    if (j.contains("emit")) {
      const auto& e = j.at("emit");
      if (e.contains("mesh_csv")) config.emit.mesh_csv = e.at("mesh_csv").get<bool>();
      if (e.contains("report_csv")) config.emit.report_csv = e.at("report_csv").get<bool>();
      if (e.contains("report_json")) config.emit.report_json = e.at("report_json").get<bool>();
      if (e.contains("solution_samples")) config.emit.solution_samples = e.at("solution_samples").get<bool>();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  validate(config);
  return config;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("config: expected 'true' or 'false', got '" + value + "'");
}

std::string unquote(const std::string& value) {
  if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
      value.back() == value.front()) {
    return value.substr(1, value.size() - 2);
  }
  return value;
}

}  // namespace

RunConfig parse_config_toml(const std::string& text) {
  RunConfig config;
  std::istringstream is(text);
  std::string line, table;
  bool saw_problem = false, saw_levels = false;
  while (std::getline(is, line)) {
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config: malformed TOML table header: " + line);
      table = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config: malformed TOML line: " + line);
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!table.empty()) key = table + "." + key;
    if (const size_t dot = key.find('.'); dot != std::string::npos && key.substr(0, dot) == "emit") {
      const std::string flag = key.substr(dot + 1);
      const bool v = parse_bool(value);
      if (flag == "mesh_csv") config.emit.mesh_csv = v;
      else if (flag == "report_csv") config.emit.report_csv = v;
      else if (flag == "report_json") config.emit.report_json = v;
      else if (flag == "solution_samples") config.emit.solution_samples = v;
      else throw ConfigError("config: unknown emit flag '" + flag + "'");
      continue;
    }
    if (key == "problem") {
      config.problem = unquote(value);
      saw_problem = true;
    } else if (key == "degree") {
      config.degree = std::stoi(value);
    } else if (key == "quadrature_nodes") {
      config.quadrature_nodes = std::stoi(value);
    } else if (key == "output_dir") {
      config.output_dir = unquote(value);
    } else if (key == "grading") {
      const std::string v = unquote(value);
      if (v == "uniform" || v == "auto") {
        set_grading(config, v);
      } else {
        try {
          size_t used = 0;
          config.grading_value = std::stod(v, &used);
          if (used != v.size()) throw std::invalid_argument(v);
          config.grading = GradingMode::explicit_value;
        } catch (const std::exception&) {
          throw ConfigError("config: grading must be 'uniform', 'auto' or a number in (0, 1]");
        }
      }
    } else if (key == "levels") {
      if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
        throw ConfigError("config: levels must be an array like [5, 9, 17]");
      }
      std::string body = value.substr(1, value.size() - 2);
      std::replace(body.begin(), body.end(), ',', ' ');
      std::istringstream vs(body);
      int n = 0;
      while (vs >> n) config.levels.push_back(n);
      saw_levels = true;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  if (!saw_problem) throw ConfigError("config: missing required key 'problem'");
  if (!saw_levels) throw ConfigError("config: missing required key 'levels'");
  validate(config);
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  const bool toml = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
  return toml ? parse_config_toml(buf.str()) : parse_config_json(buf.str());
}

}  // namespace polar_iga
