#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "torushol/errors.hpp"
#include "torushol/solver.hpp"

namespace torushol {

/// Flat key-value configuration with [section] headers. Values are plain
/// numbers or comma-separated lists; '#' starts a comment. Environment
/// variables of the form TORUSHOL_<SECTION>_<KEY> override file values.
class Config {
 public:
  static Config from_stream(std::istream& in) {
    Config cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto trimmed = trim(line);
      if (trimmed.empty()) continue;
      if (trimmed.front() == '[' && trimmed.back() == ']') {
        section = trim(trimmed.substr(1, trimmed.size() - 2));
        continue;
      }
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
      }
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      cfg.values_[section + "." + key] = value;
    }
    return cfg;
  }

  static Config from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return from_stream(in);
  }

  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const {
    if (const char* env = env_override(section, key)) return env;
    const auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& section, const std::string& key, double fallback) const {
    const std::string v = get(section, key, "");
    if (v.empty()) return fallback;
    try {
      return std::stod(v);
    } catch (...) {
      throw ConfigError("config value " + section + "." + key + " = '" + v + "' is not a number");
    }
  }

  int get_int(const std::string& section, const std::string& key, int fallback) const {
    return static_cast<int>(get_double(section, key, fallback));
  }

  std::vector<double> get_list(const std::string& section, const std::string& key,
                               std::vector<double> fallback) const {
    const std::string v = get(section, key, "");
    if (v.empty()) return fallback;
    std::vector<double> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stod(trim(item)));
      } catch (...) {
        throw ConfigError("config list " + section + "." + key + " has a non-numeric entry");
      }
    }
    return out;
  }

  SolveConfig solve_config() const {
    SolveConfig s;
    s.residual_tol = get_double("solver", "residual_tol", s.residual_tol);
    s.max_iterations = get_int("solver", "max_iterations", s.max_iterations);
    s.fd_step = get_double("solver", "fd_step", s.fd_step);
    s.damping = get_double("solver", "damping", s.damping);
    s.rho_grid = get_list("solver", "rho_grid", s.rho_grid);
    s.word_depth = get_int("solver", "word_depth", s.word_depth);
    s.k = get_int("solver", "k", s.k);
    s.transport_tol = get_double("transport", "tol", s.transport_tol);
    s.pole_radius = get_double("transport", "pole_radius", s.pole_radius);
    s.validate();
    return s;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  static const char* env_override(const std::string& section, const std::string& key) {
    std::string name = "TORUSHOL_" + section + "_" + key;
    for (auto& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return std::getenv(name.c_str());
  }

  std::map<std::string, std::string> values_;
};

}  // namespace torushol
