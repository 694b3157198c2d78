// config.hpp - flat key=value configuration files for the emitter
// parameters.
//
// Format: one "key = value" pair per line, '#' starts a comment,
// blank lines are ignored. List values are comma separated. Keys:
//
//   delta_ghz            branch splitting, GHz
//   tau_ns               radiative lifetime, ns
//   temperature_k        bath temperature, K
//   gamma_per_ns         symmetric branch flip rate, 1/ns
//   dipole_x_deg         in-plane angle of the X dipole, degrees
//   linewidth_mhz        per-line FWHM, MHz (defaults to the natural width)
//   spin_offsets_x_ghz   three comma separated offsets, GHz
//   spin_offsets_y_ghz   three comma separated offsets, GHz
//
// Unknown keys are rejected so that typos fail loudly instead of being
// silently ignored.
#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nvpol/core_model.hpp"
#include "nvpol/errors.hpp"

namespace nvpol {

using ConfigMap = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (t.empty()) throw DataError(where + ": empty numeric value");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw DataError(where + ": cannot parse '" + t + "' as a number");
  return v;
}

}  // namespace detail

/// Parses key=value text. source_name only labels error messages.
inline ConfigMap parse_config(std::istream& in, const std::string& source_name) {
  ConfigMap out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (eq == std::string::npos)
      throw DataError(where + ": expected 'key = value'");
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string value = detail::trim(body.substr(eq + 1));
    if (key.empty()) throw DataError(where + ": empty key");
    if (out.count(key)) throw DataError(where + ": duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

inline ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

/// Emitter parameters plus the two knobs that live outside LevelModel.
struct PhysicalParams {
  LevelModel model{};
  double temperature_k = 4.0;
  double gamma_per_ns = 0.05;  // symmetric flip rate; 20 ns hopping time

  void validate() const {
    model.validate();
    if (!(temperature_k > 0.0))
      throw DomainError("PhysicalParams: temperature_k must be > 0");
    if (gamma_per_ns < 0.0)
      throw DomainError("PhysicalParams: gamma_per_ns must be >= 0");
  }
};

namespace detail {

inline std::array<double, 3> parse_offsets(const std::string& text, const std::string& key) {
  std::vector<double> vals;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ','))
    vals.push_back(parse_double(item, key));
  if (vals.size() != 3)
    throw DataError(key + ": expected exactly 3 comma separated offsets, got " +
                    std::to_string(vals.size()));
  return {vals[0], vals[1], vals[2]};
}

}  // namespace detail

/// Builds validated parameters from a parsed config. Keys may be absent
/// (defaults apply); unknown keys raise DataError. When tau_ns is given
/// without linewidth_mhz the linewidth follows the natural width.
inline PhysicalParams params_from_config(const ConfigMap& cfg) {
  static const char* known[] = {"delta_ghz",    "tau_ns",        "temperature_k",
                                "gamma_per_ns", "dipole_x_deg",  "linewidth_mhz",
                                "spin_offsets_x_ghz", "spin_offsets_y_ghz"};
  for (const auto& [key, value] : cfg) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw DataError("config: unknown key '" + key + "'");
  }

  PhysicalParams p;
  auto get = [&cfg](const char* key, double fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : detail::parse_double(it->second, key);
  };
  p.model.delta_ghz = get("delta_ghz", p.model.delta_ghz);
  p.model.tau_ns = get("tau_ns", p.model.tau_ns);
  p.model.dipole_x_angle_deg = get("dipole_x_deg", p.model.dipole_x_angle_deg);
  p.temperature_k = get("temperature_k", p.temperature_k);
  p.gamma_per_ns = get("gamma_per_ns", p.gamma_per_ns);
  if (cfg.count("linewidth_mhz"))
    p.model.linewidth_mhz = detail::parse_double(cfg.at("linewidth_mhz"), "linewidth_mhz");
  else
    p.model.linewidth_mhz = natural_linewidth_mhz(p.model.tau_ns);
  if (cfg.count("spin_offsets_x_ghz"))
    p.model.spin_offsets_x_ghz =
        detail::parse_offsets(cfg.at("spin_offsets_x_ghz"), "spin_offsets_x_ghz");
  if (cfg.count("spin_offsets_y_ghz"))
    p.model.spin_offsets_y_ghz =
        detail::parse_offsets(cfg.at("spin_offsets_y_ghz"), "spin_offsets_y_ghz");

  p.validate();
  return p;
}

}  // namespace nvpol
