// Experiment configuration: a flat key = value text format with a JSON
// alternative. Parsing is strict; every diagnostic names the offending
// field. Configs describe either a named preset run or a fully custom check
// (domain, function, exponents, levels).
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "choquet/domains.hpp"
#include "choquet/functions.hpp"
#include "choquet/inequalities.hpp"

namespace choquet {

enum class Command { Content, Integrate, Maximal, Check, Sweep, Axioms };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::Content: return "content";
    case Command::Integrate: return "integrate";
    case Command::Maximal: return "maximal";
    case Command::Check: return "check";
    case Command::Sweep: return "sweep";
    case Command::Axioms: return "axioms";
  }
  throw std::logic_error("unknown command");
}

// Malformed configuration text; the message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  Command command = Command::Check;
  std::string preset;  // when set, the named preset supplies the checks

  // Custom check description, used when no preset is named.
  std::string theorem = "poincare";
  std::string domain = "spire";  // annulus | ball | box | spire | room-inward | room-outward
  int dim = 2;
  double domain_inner = 0.25;  // annulus
  double domain_outer = 0.45;
  std::vector<double> domain_center = {0.5, 0.5};  // ball
  double domain_radius = 0.45;
  std::vector<double> domain_lo = {0.125, 0.125};  // box
  std::vector<double> domain_hi = {0.875, 0.875};
  double domain_s = 1.5;      // spire
  double domain_gamma = 2.0;  // room cusp exponent
  double domain_position = 0.5;

  std::string family = "fourier";  // bump | power | fourier | distpow
  std::vector<double> bump_center = {0.5, 0.5};
  double bump_inner = 0.14;
  double bump_outer = 0.35;
  double alpha = 1.0;          // power profile exponent
  double distpow_gamma = 1.5;  // distance power exponent
  int modes = 3;               // fourier
  double amplitude = 1.0;
  double scale = 1.0;

  double delta = 2.0;
  double kappa = 0.0;
  double p = 1.25;
  double s = 1.5;
  double epsilon = 0.0;
  double k = 0.5;
  std::vector<double> t_grid;
  std::string b_mode = "infimum";  // infimum | john-average

  int level = 6;
  int refine_level = 0;  // 0 = base level only
  bool refine_flag = false;
  bool level_set = false;  // a --level or level= override was given
  int quantize = 0;
  std::uint64_t seed = 1;
  int sets = 100;  // axioms: number of random instances
  std::vector<double> sweep_grid;
  std::string out = "report";
  bool quiet = false;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double config_number(const std::string& field, const std::string& raw) {
  try {
    std::size_t used = 0;
    double v = std::stod(raw, &used);
    if (trim(raw.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config field '" + field + "': expected a number, got '" + raw + "'");
}

inline long long config_integer(const std::string& field, const std::string& raw) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(raw, &used);
    if (trim(raw.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config field '" + field + "': expected an integer, got '" + raw + "'");
}

inline bool config_flag(const std::string& field, const std::string& raw) {
  std::string v = trim(raw);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("config field '" + field + "': expected a boolean, got '" + raw + "'");
}

inline std::vector<double> config_list(const std::string& field, const std::string& raw) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(raw);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(config_number(field, item));
  }
  return out;
}

}  // namespace detail

// Pads a coordinate list out to the fixed-width Vec; unused axes stay zero.
inline Vec vec_of(const std::vector<double>& v) {
  if (v.size() > static_cast<std::size_t>(kMaxDim))
    throw ConfigError("coordinate list has more than " + std::to_string(kMaxDim) + " entries");
  Vec out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

inline Command parse_command(const std::string& s) {
  if (s == "content") return Command::Content;
  if (s == "integrate") return Command::Integrate;
  if (s == "maximal") return Command::Maximal;
  if (s == "check") return Command::Check;
  if (s == "sweep") return Command::Sweep;
  if (s == "axioms") return Command::Axioms;
  throw ConfigError("config field 'command': unknown command '" + s + "'");
}

// Applies one key = value pair; unknown keys are errors so typos surface.
inline void apply_config_field(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  using detail::config_flag;
  using detail::config_integer;
  using detail::config_list;
  using detail::config_number;
  if (key == "command") {
    cfg.command = parse_command(detail::trim(value));
  } else if (key == "preset") {
    cfg.preset = detail::trim(value);
  } else if (key == "theorem") {
    cfg.theorem = detail::trim(value);
  } else if (key == "domain") {
    cfg.domain = detail::trim(value);
  } else if (key == "dim") {
    cfg.dim = static_cast<int>(config_integer(key, value));
  } else if (key == "domain.inner") {
    cfg.domain_inner = config_number(key, value);
  } else if (key == "domain.outer") {
    cfg.domain_outer = config_number(key, value);
  } else if (key == "domain.center") {
    cfg.domain_center = config_list(key, value);
  } else if (key == "domain.radius") {
    cfg.domain_radius = config_number(key, value);
  } else if (key == "domain.lo") {
    cfg.domain_lo = config_list(key, value);
  } else if (key == "domain.hi") {
    cfg.domain_hi = config_list(key, value);
  } else if (key == "domain.s") {
    cfg.domain_s = config_number(key, value);
  } else if (key == "domain.gamma") {
    cfg.domain_gamma = config_number(key, value);
  } else if (key == "domain.position") {
    cfg.domain_position = config_number(key, value);
  } else if (key == "family") {
    cfg.family = detail::trim(value);
  } else if (key == "family.center") {
    cfg.bump_center = config_list(key, value);
  } else if (key == "family.inner") {
    cfg.bump_inner = config_number(key, value);
  } else if (key == "family.outer") {
    cfg.bump_outer = config_number(key, value);
  } else if (key == "family.alpha") {
    cfg.alpha = config_number(key, value);
  } else if (key == "family.gamma") {
    cfg.distpow_gamma = config_number(key, value);
  } else if (key == "family.modes") {
    cfg.modes = static_cast<int>(config_integer(key, value));
  } else if (key == "family.amplitude") {
    cfg.amplitude = config_number(key, value);
  } else if (key == "family.scale") {
    cfg.scale = config_number(key, value);
  } else if (key == "delta") {
    cfg.delta = config_number(key, value);
  } else if (key == "kappa") {
    cfg.kappa = config_number(key, value);
  } else if (key == "p") {
    cfg.p = config_number(key, value);
  } else if (key == "s") {
    cfg.s = config_number(key, value);
  } else if (key == "epsilon") {
    cfg.epsilon = config_number(key, value);
  } else if (key == "k") {
    cfg.k = config_number(key, value);
  } else if (key == "t_grid") {
    cfg.t_grid = config_list(key, value);
  } else if (key == "b_mode") {
    std::string v = detail::trim(value);
    if (v != "infimum" && v != "john-average")
      throw ConfigError("config field 'b_mode': expected infimum or john-average, got '" + v + "'");
    cfg.b_mode = v;
  } else if (key == "level") {
    cfg.level = static_cast<int>(config_integer(key, value));
    cfg.level_set = true;
  } else if (key == "refine_level") {
    cfg.refine_level = static_cast<int>(config_integer(key, value));
  } else if (key == "refine") {
    cfg.refine_flag = config_flag(key, value);
  } else if (key == "quantize") {
    cfg.quantize = static_cast<int>(config_integer(key, value));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(config_integer(key, value));
  } else if (key == "sets") {
    cfg.sets = static_cast<int>(config_integer(key, value));
  } else if (key == "sweep_grid") {
    cfg.sweep_grid = config_list(key, value);
  } else if (key == "out") {
    cfg.out = detail::trim(value);
  } else if (key == "quiet") {
    cfg.quiet = config_flag(key, value);
  } else {
    throw ConfigError("unknown config field '" + key + "'");
  }
}

// key = value records, one per line; '#' starts a comment.
inline ExperimentConfig parse_config_text(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value, got '" +
                        line + "'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    apply_config_field(cfg, key, value);
  }
  return cfg;
}

// Flat JSON object with the same field names as the text format.
inline ExperimentConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON root must be an object");
  ExperimentConfig cfg;
  for (auto& [key, value] : j.items()) {
    std::string raw;
    if (value.is_string()) {
      raw = value.get<std::string>();
    } else if (value.is_boolean()) {
      raw = value.get<bool>() ? "true" : "false";
    } else if (value.is_number()) {
      raw = format_double(value.get<double>());
    } else if (value.is_array()) {
      std::string joined;
      for (auto& item : value) {
        if (!item.is_number())
          throw ConfigError("config field '" + key + "': array entries must be numbers");
        if (!joined.empty()) joined += ",";
        joined += format_double(item.get<double>());
      }
      raw = joined;
    } else {
      throw ConfigError("config field '" + key + "': unsupported JSON value type");
    }
    apply_config_field(cfg, key, raw);
  }
  return cfg;
}

// Dispatches on content: files whose first non-space character is '{' parse
// as JSON, everything else as key = value text.
inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return parse_config_json(text);
    break;
  }
  std::istringstream stream(text);
  return parse_config_text(stream);
}

// Builds the analytic domain described by the config.
inline DomainSpec domain_from_config(const ExperimentConfig& cfg) {
  const std::string& d = cfg.domain;
  if (d == "annulus") return DomainSpec::annulus(cfg.domain_inner, cfg.domain_outer);
  if (d == "ball") return DomainSpec::ball(vec_of(cfg.domain_center), cfg.domain_radius);
  if (d == "box") return DomainSpec::box(vec_of(cfg.domain_lo), vec_of(cfg.domain_hi));
  if (d == "spire") return DomainSpec::spire(cfg.domain_s);
  if (d == "room-inward") return DomainSpec::room_with_cusp(cfg.domain_gamma, cfg.domain_position, true);
  if (d == "room-outward")
    return DomainSpec::room_with_cusp(cfg.domain_gamma, cfg.domain_position, false);
  throw ConfigError("config field 'domain': unknown domain kind '" + d + "'");
}

// Builds the test function described by the config. Fourier draws are fully
// determined by the seed.
inline TestFunction function_from_config(const ExperimentConfig& cfg) {
  TestFunction fn = [&] {
    const std::string& f = cfg.family;
    if (f == "bump")
      return TestFunction::radial_bump(vec_of(cfg.bump_center), cfg.bump_inner, cfg.bump_outer);
    if (f == "power") return TestFunction::power_profile(cfg.alpha);
    if (f == "fourier")
      return TestFunction::fourier_field(cfg.seed, cfg.modes, cfg.amplitude);
    if (f == "distpow") return TestFunction::distance_power(cfg.distpow_gamma);
    throw ConfigError("config field 'family': unknown function family '" + cfg.family + "'");
  }();
  return cfg.scale == 1.0 ? fn : fn.scaled(cfg.scale);
}

// Maps the config's function family to its one swept parameter: bump outer
// radius (inner stays at 0.4x), power and distance exponents, fourier amplitude.
inline std::function<TestFunction(double)> sweep_family_from_config(const ExperimentConfig& cfg) {
  const std::string& f = cfg.family;
  if (f == "bump") {
    Vec center = vec_of(cfg.bump_center);
    return [center](double outer) { return TestFunction::radial_bump(center, 0.4 * outer, outer); };
  }
  if (f == "power")
    return [](double alpha) { return TestFunction::power_profile(alpha); };
  if (f == "distpow")
    return [](double gamma) { return TestFunction::distance_power(gamma); };
  if (f == "fourier") {
    std::uint64_t seed = cfg.seed;
    int modes = cfg.modes;
    return [seed, modes](double amp) { return TestFunction::fourier_field(seed, modes, amp); };
  }
  throw ConfigError("config field 'family': unknown function family '" + cfg.family + "'");
}

inline TheoremId theorem_from_name(const std::string& name) {
  for (TheoremId id : {TheoremId::HardyPointwise, TheoremId::Hardy, TheoremId::HardyEpsilon,
                       TheoremId::SJohnPointwise, TheoremId::Poincare, TheoremId::PoincareSobolev,
                       TheoremId::WeakType})
    if (name == theorem_name(id)) return id;
  throw ConfigError("config field 'theorem': unknown theorem '" + name + "'");
}

inline InequalityParams params_from_config(const ExperimentConfig& cfg) {
  InequalityParams prm;
  prm.delta = cfg.delta;
  prm.kappa = cfg.kappa;
  prm.p = cfg.p;
  prm.s = cfg.s;
  prm.epsilon = cfg.epsilon;
  prm.k = cfg.k;
  prm.t_grid = cfg.t_grid;
  return prm;
}

inline BMode b_mode_from_config(const ExperimentConfig& cfg) {
  return cfg.b_mode == "john-average" ? BMode::JohnAverage : BMode::Infimum;
}

}  // namespace choquet
