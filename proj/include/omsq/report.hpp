#pragma once

// JSON views of parameters, steady states and stability reports; every
// output file embeds `describe(params)` as its provenance record.

#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "omsq/dynamics.hpp"
#include "omsq/model.hpp"
#include "omsq/steady_state.hpp"

namespace omsq {

using json = nlohmann::ordered_json;

inline constexpr const char* kArtifactName = "omsq";
inline constexpr const char* kArtifactVersion = "0.1.0";

inline json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline json describe_constants(const PhysicalConstants& k) {
  json j;
  j["hbar"] = k.hbar;
  j["k_b"] = k.k_b;
  j["mu_0"] = k.mu_0;
  j["c_light"] = k.c_light;
  j["gamma_gyro"] = k.gamma_gyro;
  j["rho_spin"] = k.rho_spin;
  j["overridden"] = k.overridden();
  // Literature values the model needs but the operating point does not fix.
  j["not_from_model_source"] = json::array({"gamma_gyro", "rho_spin"});
  j["field_amplitude_convention"] = "H_d from sqrt(2 mu_0 P_0/(l w c)) taken in tesla; gamma_gyro * H_d in rad/s";
  return j;
}

inline json describe_drive(const SystemParams& p) {
  json j;
  j["magnon_route"] = p.drive.magnon_route();
  j["cavity_route"] = p.drive.cavity_route();
  if (const auto* m = std::get_if<MagnonDrivePhysical>(&p.drive.magnon)) {
    j["magnon"] = {{"power_w", m->power_w},
                   {"length_m", m->length_m},
                   {"width_m", m->width_m},
                   {"volume_m3", m->volume_m3}};
  } else {
    j["magnon"] = {{"rabi_rad_s", std::get<MagnonDriveDirect>(p.drive.magnon).rabi.rad_per_s()}};
  }
  if (const auto* c = std::get_if<CavityDrivePhysical>(&p.drive.cavity)) {
    j["cavity"] = {{"power_w", c->power_w}, {"wavelength_m", c->wavelength_m}};
  } else {
    j["cavity"] = {{"amplitude_rad_s", std::get<CavityDriveDirect>(p.drive.cavity).amplitude.rad_per_s()}};
  }
  const DriveAmplitudes d = resolve_drives(p);
  j["rabi_rad_s"] = d.rabi.rad_per_s();
  j["cavity_amplitude_rad_s"] = d.cavity.rad_per_s();
  j["g_mb_target_hz"] = p.drive.g_mb_target ? json(p.drive.g_mb_target->hz()) : json(nullptr);
  j["g_bc_target_hz"] = p.drive.g_bc_target ? json(p.drive.g_bc_target->hz()) : json(nullptr);
  return j;
}

inline json describe_parameters(const SystemParams& p) {
  const double wb = p.omega_b.rad_per_s();
  json j;
  j["omega_a_hz"] = p.omega_a.hz();
  j["omega_m_hz"] = p.omega_m.hz();
  j["omega_c_hz"] = p.optical_frequency().hz();
  j["omega_b_hz"] = p.omega_b.hz();
  j["delta_a"] = p.delta_a.rad_per_s() / wb;
  j["delta_m"] = p.delta_m.rad_per_s() / wb;
  j["delta_c"] = p.delta_c.rad_per_s() / wb;
  j["kappa_a_hz"] = p.kappa_a.hz();
  j["kappa_m_hz"] = p.kappa_m.hz();
  j["kappa_1"] = p.kappa_1.rad_per_s() / wb;
  j["kappa_2"] = p.kappa_2.rad_per_s() / wb;
  j["gamma_b_hz"] = p.gamma_b.hz();
  j["g_ma_hz"] = p.g_ma.hz();
  j["g_mb_hz"] = p.g_mb.hz();
  j["g_bc_hz"] = p.g_bc.hz();
  j["temperature_k"] = p.temperature_k;
  j["phi_pi"] = p.phi / std::numbers::pi;
  j["detuning_frame"] = to_string(p.frame);
  return j;
}

inline json describe_steady_state(const SteadyState& ss, const SystemParams& p) {
  const double wb = p.omega_b.rad_per_s();
  json j;
  j["m_avg"] = to_json(ss.m_avg);
  j["c_avg"] = to_json(ss.c_avg);
  j["q_avg"] = ss.q_avg;
  j["delta_m_eff"] = ss.delta_m_eff.rad_per_s();
  j["delta_c_eff"] = ss.delta_c_eff.rad_per_s();
  j["delta_m_bare"] = ss.delta_m_bare.rad_per_s();
  j["delta_c_bare"] = ss.delta_c_bare.rad_per_s();
  j["G_mb"] = to_json(ss.G_mb);
  j["G_bc"] = to_json(ss.G_bc);
  j["iterations"] = ss.iterations;
  j["residual"] = ss.residual;
  j["units"] = "rates in rad/s";
  j["over_omega_b"] = {{"delta_m_eff", ss.delta_m_eff.rad_per_s() / wb},
                       {"delta_c_eff", ss.delta_c_eff.rad_per_s() / wb},
                       {"abs_G_mb", std::abs(ss.G_mb) / wb},
                       {"abs_G_bc", std::abs(ss.G_bc) / wb}};
  return j;
}

inline json describe_calibration(const SteadyState& ss) {
  return json{{"magnon_scale", ss.magnon_scale}, {"cavity_scale", ss.cavity_scale}};
}

inline json describe_stability(const StabilityReport& r) {
  json j;
  j["stable"] = r.stable;
  j["margin"] = r.margin;
  json ev = json::array();
  for (const cplx& z : r.eigenvalues) ev.push_back(to_json(z));
  j["eigenvalues"] = ev;
  j["units"] = "omega_b";
  return j;
}

/// Provenance block: resolved parameters, constants, drive routes and the
/// calibration factors at the base point (null when it has no steady state).
inline json describe(const SystemParams& p) {
  json j;
  j["artifact"] = {{"name", kArtifactName}, {"version", kArtifactVersion}};
  j["parameters"] = describe_parameters(p);
  j["constants"] = describe_constants(p.constants);
  j["drive"] = describe_drive(p);
  try {
    j["calibration"] = describe_calibration(solve_steady_state(p));
  } catch (const std::exception& e) {
    j["calibration"] = nullptr;
    j["calibration_error"] = e.what();
  }
  return j;
}

}  // namespace omsq
