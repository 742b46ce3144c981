#pragma once

// Strict INI-style configuration:
//
//   # comment
//   [constants]      hbar, k_b, mu_0, c_light, gamma_gyro, rho_spin
//   [physics]        model keys (detunings, kappa_1/2 in units of omega_b) and drive.*
//   [sweep]          axis1.*, axis2.*, fixed.<param>, output.path, output.format
//
// Keys before the first section header belong to [physics]. Unknown keys,
// duplicate keys and malformed values are errors that name the line.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "omsq/errors.hpp"
#include "omsq/model.hpp"

namespace omsq {

enum class SweepParam { omega, delta_c, delta_m_eq_a, phi, kappa_c, temperature };

inline constexpr std::array<std::pair<SweepParam, std::string_view>, 6> kSweepParamNames{{
    {SweepParam::omega, "omega"},
    {SweepParam::delta_c, "delta_c"},
    {SweepParam::delta_m_eq_a, "delta_m_eq_a"},
    {SweepParam::phi, "phi"},
    {SweepParam::kappa_c, "kappa_c"},
    {SweepParam::temperature, "temperature"},
}};

inline std::string to_string(SweepParam p) {
  for (const auto& [k, name] : kSweepParamNames) {
    if (k == p) return std::string(name);
  }
  return "?";
}

inline std::optional<SweepParam> sweep_param_from_string(std::string_view s) {
  for (const auto& [k, name] : kSweepParamNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

enum class OutputFormat { csv, json };

inline std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

/// One sweep axis. Values are in units of omega_b for omega, delta_c,
/// delta_m_eq_a and kappa_c; in units of pi for phi; in kelvin for temperature.
struct SweepAxis {
  SweepParam param = SweepParam::omega;
  double min = 0.0;
  double max = 1.0;
  std::size_t points = 2;

  std::vector<double> values() const {
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) {
      out[i] = points == 1 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return out;
  }
};

struct SweepSpec {
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;
  std::map<SweepParam, double> fixed_overrides;
  std::string output_path;
  OutputFormat format = OutputFormat::csv;

  void validate() const {
    auto check_axis = [](const SweepAxis& a, const char* name) {
      // A single point is accepted for degenerate grids; otherwise min < max.
      if (a.points < 1) throw ConfigError(std::string(name) + ".points must be >= 1");
      if (a.points >= 2 && !(a.min < a.max)) throw ConfigError(std::string(name) + ": min must be < max");
      if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw ConfigError(std::string(name) + ": bounds must be finite");
    };
    check_axis(axis1, "axis1");
    if (axis2) {
      check_axis(*axis2, "axis2");
      if (axis2->param == axis1.param) throw ConfigError("axis1 and axis2 sweep the same parameter");
    }
    for (const auto& [param, value] : fixed_overrides) {
      if (param == axis1.param || (axis2 && param == axis2->param)) {
        throw ConfigError("parameter '" + to_string(param) + "' is both swept and fixed");
      }
      if (!std::isfinite(value)) throw ConfigError("fixed." + to_string(param) + " must be finite");
    }
    const bool omega_swept = axis1.param == SweepParam::omega || (axis2 && axis2->param == SweepParam::omega);
    if (!omega_swept && !fixed_overrides.contains(SweepParam::omega)) {
      throw ConfigError("sweep has no omega axis; set fixed.omega");
    }
  }
};

struct Config {
  SystemParams params;
  std::optional<SweepSpec> sweep;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Entry {
  std::string value;
  int line;
};

class ConfigReader {
 public:
  using Section = std::map<std::string, Entry>;

  explicit ConfigReader(std::string_view text) {
    std::string current = "physics";
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) {
        if (end == text.size()) break;
        continue;
      }
      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "malformed section header");
        current = std::string(trim(line.substr(1, line.size() - 2)));
        if (current != "constants" && current != "physics" && current != "sweep") {
          fail(line_no, "unknown section [" + current + "]");
        }
        sections_[current];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) fail(line_no, "empty key");
      if (value.empty()) fail(line_no, "empty value for '" + key + "'");
      auto& sec = sections_[current];
      if (sec.contains(key)) fail(line_no, "duplicate key '" + key + "' in [" + current + "]");
      sec.emplace(key, Entry{value, line_no});
      if (end == text.size()) break;
    }
  }

  [[noreturn]] static void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
  }

  bool has_section(const std::string& s) const { return sections_.contains(s); }

  bool has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.contains(key);
  }

  // Removes and returns a key; leftover keys are reported as unknown.
  std::optional<Entry> take(const std::string& section, const std::string& key) {
    auto it = sections_.find(section);
    if (it == sections_.end()) return std::nullopt;
    auto k = it->second.find(key);
    if (k == it->second.end()) return std::nullopt;
    Entry e = k->second;
    it->second.erase(k);
    return e;
  }

  std::optional<double> take_number(const std::string& section, const std::string& key) {
    auto e = take(section, key);
    if (!e) return std::nullopt;
    double v = 0.0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      fail(e->line, "value of '" + key + "' is not a finite number: '" + e->value + "'");
    }
    return v;
  }

  std::vector<std::string> keys_with_prefix(const std::string& section, const std::string& prefix) const {
    std::vector<std::string> out;
    auto it = sections_.find(section);
    if (it == sections_.end()) return out;
    for (const auto& [k, e] : it->second) {
      if (k.rfind(prefix, 0) == 0) out.push_back(k);
    }
    return out;
  }

  void reject_leftovers() const {
    for (const auto& [name, sec] : sections_) {
      if (!sec.empty()) {
        const auto& [key, e] = *sec.begin();
        fail(e.line, "unknown key '" + key + "' in [" + name + "]");
      }
    }
  }

 private:
  std::map<std::string, Section> sections_;
};

inline PhysicalConstants read_constants(ConfigReader& r) {
  PhysicalConstants k;
  auto set = [&](const char* key, double& field) {
    if (auto v = r.take_number("constants", key)) field = *v;
  };
  set("hbar", k.hbar);
  set("k_b", k.k_b);
  set("mu_0", k.mu_0);
  set("c_light", k.c_light);
  set("gamma_gyro", k.gamma_gyro);
  set("rho_spin", k.rho_spin);
  k.validate();
  return k;
}

inline DriveSpec read_drive(ConfigReader& r) {
  const std::string s = "physics";
  DriveSpec d;

  const bool magnon_physical = r.has(s, "drive.magnon.power_w") || r.has(s, "drive.magnon.length_m") ||
                               r.has(s, "drive.magnon.width_m") || r.has(s, "drive.magnon.volume_m3");
  if (r.has(s, "drive.magnon.rabi_rad_s")) {
    if (magnon_physical) {
      throw ConfigError("magnon drive: give either drive.magnon.rabi_rad_s or the physical keys, not both");
    }
    d.magnon = MagnonDriveDirect{AngularFrequency(*r.take_number(s, "drive.magnon.rabi_rad_s"))};
  } else {
    MagnonDrivePhysical m;
    if (auto v = r.take_number(s, "drive.magnon.power_w")) m.power_w = *v;
    if (auto v = r.take_number(s, "drive.magnon.length_m")) m.length_m = *v;
    if (auto v = r.take_number(s, "drive.magnon.width_m")) m.width_m = *v;
    if (auto v = r.take_number(s, "drive.magnon.volume_m3")) m.volume_m3 = *v;
    d.magnon = m;
  }

  const bool cavity_physical = r.has(s, "drive.cavity.power_w") || r.has(s, "drive.cavity.wavelength_m");
  if (r.has(s, "drive.cavity.amplitude_rad_s")) {
    if (cavity_physical) {
      throw ConfigError("cavity drive: give either drive.cavity.amplitude_rad_s or the physical keys, not both");
    }
    d.cavity = CavityDriveDirect{AngularFrequency(*r.take_number(s, "drive.cavity.amplitude_rad_s"))};
  } else {
    CavityDrivePhysical c;
    if (auto v = r.take_number(s, "drive.cavity.power_w")) c.power_w = *v;
    if (auto v = r.take_number(s, "drive.cavity.wavelength_m")) c.wavelength_m = *v;
    d.cavity = c;
  }

  if (auto v = r.take_number(s, "drive.g_mb_target_hz")) d.g_mb_target = AngularFrequency::from_hz(*v);
  if (auto v = r.take_number(s, "drive.g_bc_target_hz")) d.g_bc_target = AngularFrequency::from_hz(*v);
  return d;
}

inline SystemParams read_physics(ConfigReader& r, const PhysicalConstants& k) {
  const std::string s = "physics";
  const SystemParams def = paper_defaults();
  const double def_wb = def.omega_b.rad_per_s();

  auto hz = [&](const char* key, AngularFrequency fallback) {
    auto v = r.take_number(s, key);
    return v ? AngularFrequency::from_hz(*v) : fallback;
  };
  auto in_wb = [&](const char* key, AngularFrequency fallback) {
    auto v = r.take_number(s, key);
    return v ? *v : fallback.rad_per_s() / def_wb;
  };

  SystemParams p = def;
  p.constants = k;
  p.omega_a = hz("omega_a_hz", def.omega_a);
  p.omega_m = hz("omega_m_hz", def.omega_m);
  p.omega_b = hz("omega_b_hz", def.omega_b);
  if (auto v = r.take_number(s, "omega_c_hz")) p.omega_c = AngularFrequency::from_hz(*v);
  // Detunings and the optical decays are given relative to omega_b.
  const double da = in_wb("delta_a", def.delta_a);
  const double dm = in_wb("delta_m", def.delta_m);
  const double dc = in_wb("delta_c", def.delta_c);
  const double k1 = in_wb("kappa_1", def.kappa_1);
  const double k2 = in_wb("kappa_2", def.kappa_2);
  p.delta_a = p.omega_b * da;
  p.delta_m = p.omega_b * dm;
  p.delta_c = p.omega_b * dc;
  p.kappa_1 = p.omega_b * k1;
  p.kappa_2 = p.omega_b * k2;
  p.kappa_a = hz("kappa_a_hz", def.kappa_a);
  p.kappa_m = hz("kappa_m_hz", def.kappa_m);
  p.gamma_b = hz("gamma_b_hz", def.gamma_b);
  p.g_ma = hz("g_ma_hz", def.g_ma);
  p.g_mb = hz("g_mb_hz", def.g_mb);
  p.g_bc = hz("g_bc_hz", def.g_bc);
  if (auto v = r.take_number(s, "temperature_k")) p.temperature_k = *v;
  if (auto v = r.take_number(s, "phi_pi")) p.phi = *v * std::numbers::pi;
  if (auto e = r.take(s, "detuning_frame")) {
    if (e->value == "effective") {
      p.frame = DetuningFrame::effective;
    } else if (e->value == "bare") {
      p.frame = DetuningFrame::bare;
    } else {
      ConfigReader::fail(e->line, "detuning_frame must be 'effective' or 'bare'");
    }
  }
  p.drive = read_drive(r);
  p.validate();
  return p;
}

inline std::optional<SweepAxis> read_axis(ConfigReader& r, const std::string& name) {
  const std::string s = "sweep";
  auto param = r.take(s, name + ".param");
  auto lo = r.take_number(s, name + ".min");
  auto hi = r.take_number(s, name + ".max");
  auto pts = r.take_number(s, name + ".points");
  if (!param && !lo && !hi && !pts) return std::nullopt;
  if (!param || !lo || !hi || !pts) {
    throw ConfigError("sweep " + name + " needs param, min, max and points");
  }
  SweepAxis a;
  auto kind = sweep_param_from_string(param->value);
  if (!kind) ConfigReader::fail(param->line, "unknown sweep parameter '" + param->value + "'");
  a.param = *kind;
  a.min = *lo;
  a.max = *hi;
  if (*pts < 1.0 || *pts != std::floor(*pts) || *pts > 1e8) {
    throw ConfigError("sweep " + name + ".points must be a positive integer");
  }
  a.points = static_cast<std::size_t>(*pts);
  return a;
}

inline std::optional<SweepSpec> read_sweep(ConfigReader& r) {
  if (!r.has_section("sweep")) return std::nullopt;
  const std::string s = "sweep";
  SweepSpec spec;
  auto a1 = read_axis(r, "axis1");
  spec.axis2 = read_axis(r, "axis2");
  for (const std::string& key : r.keys_with_prefix(s, "fixed.")) {
    const auto name = key.substr(6);
    auto kind = sweep_param_from_string(name);
    if (!kind) {
      auto e = r.take(s, key);
      ConfigReader::fail(e->line, "unknown fixed parameter '" + name + "'");
    }
    spec.fixed_overrides[*kind] = *r.take_number(s, key);
  }
  if (auto e = r.take(s, "output.path")) spec.output_path = e->value;
  if (auto e = r.take(s, "output.format")) {
    if (e->value == "csv") {
      spec.format = OutputFormat::csv;
    } else if (e->value == "json") {
      spec.format = OutputFormat::json;
    } else {
      ConfigReader::fail(e->line, "output.format must be 'csv' or 'json'");
    }
  }
  if (!a1) {
    r.reject_leftovers();
    throw ConfigError("[sweep] section requires axis1");
  }
  spec.axis1 = *a1;
  return spec;
}

}  // namespace detail

/// Parses a configuration; omitted physics keys fall back to `paper_defaults()`.
inline Config parse_config(std::string_view text) {
  detail::ConfigReader reader(text);
  Config cfg;
  const PhysicalConstants k = detail::read_constants(reader);
  cfg.params = detail::read_physics(reader, k);
  cfg.sweep = detail::read_sweep(reader);
  reader.reject_leftovers();
  if (cfg.sweep) cfg.sweep->validate();
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace omsq
