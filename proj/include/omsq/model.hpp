#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "omsq/errors.hpp"
#include "omsq/units.hpp"

namespace omsq {

// ---------------------------------------------------------------------------
// Drive description
// ---------------------------------------------------------------------------

/// Microwave drive of the magnon specified through the physical bridge geometry.
struct MagnonDrivePhysical {
  double power_w = 5.0e-3;
  double length_m = 5.0e-6;
  double width_m = 3.0e-6;
  double volume_m3 = 5.0e-6 * 3.0e-6 * 2.0e-6;  // YIG cuboid, sets N_s with rho_spin
};

/// Magnon drive given directly as a Rabi frequency (may be negative).
struct MagnonDriveDirect {
  AngularFrequency rabi;
};

struct CavityDrivePhysical {
  double power_w = 0.64e-3;
  double wavelength_m = 1550e-9;
};

/// Optical drive given directly as the amplitude E.
struct CavityDriveDirect {
  AngularFrequency amplitude;
};

struct DriveSpec {
  std::variant<MagnonDrivePhysical, MagnonDriveDirect> magnon = MagnonDrivePhysical{};
  std::variant<CavityDrivePhysical, CavityDriveDirect> cavity = CavityDrivePhysical{};
  // Calibration overrides: the steady state is rescaled so |G| hits these.
  std::optional<AngularFrequency> g_mb_target;
  std::optional<AngularFrequency> g_bc_target;

  std::string magnon_route() const {
    return std::holds_alternative<MagnonDrivePhysical>(magnon) ? "physical" : "direct";
  }
  std::string cavity_route() const {
    return std::holds_alternative<CavityDrivePhysical>(cavity) ? "physical" : "direct";
  }
};

/// How the configured magnon and optical detunings are interpreted.
///
/// `effective`: they are the shifted detunings entering the linearized
/// dynamics; the bare values follow from the displacement <q>.
/// `bare`: they are the rotating-frame detunings, and the shift g<q> is found
/// by fixed-point iteration together with <q>.
enum class DetuningFrame { effective, bare };

inline std::string to_string(DetuningFrame f) { return f == DetuningFrame::effective ? "effective" : "bare"; }

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

inline constexpr double kMinMechanicalQ = 100.0;
inline constexpr double kDefaultLaserWavelength = 1550e-9;

struct SystemParams {
  AngularFrequency omega_a, omega_m, omega_b;
  std::optional<AngularFrequency> omega_c;  // derived from the laser line when absent
  AngularFrequency delta_a, delta_m, delta_c;
  AngularFrequency kappa_a, kappa_m, kappa_1, kappa_2;
  AngularFrequency gamma_b;
  AngularFrequency g_ma, g_mb, g_bc;
  double temperature_k = 0.0;
  double phi = 0.0;  // homodyne phase, radians
  DriveSpec drive;
  DetuningFrame frame = DetuningFrame::effective;
  PhysicalConstants constants;

  AngularFrequency kappa_c() const { return kappa_1 + kappa_2; }
  double mechanical_q() const { return omega_b.rad_per_s() / gamma_b.rad_per_s(); }

  double laser_wavelength_m() const {
    if (const auto* phys = std::get_if<CavityDrivePhysical>(&drive.cavity)) return phys->wavelength_m;
    return kDefaultLaserWavelength;
  }

  AngularFrequency laser_frequency() const {
    return AngularFrequency(two_pi * constants.c_light / laser_wavelength_m());
  }

  /// Absolute optical resonance; only thermal occupations need it.
  AngularFrequency optical_frequency() const { return omega_c ? *omega_c : laser_frequency() + delta_c; }

  void validate() const;
};

inline void SystemParams::validate() const {
  constants.validate();
  auto finite = [](AngularFrequency f, const char* name) {
    if (!std::isfinite(f.rad_per_s())) throw ConfigError(std::string(name) + " must be finite");
  };
  auto non_negative = [&](AngularFrequency f, const char* name) {
    finite(f, name);
    if (f.rad_per_s() < 0.0) throw ConfigError(std::string(name) + " must be >= 0");
  };
  auto positive = [&](AngularFrequency f, const char* name) {
    finite(f, name);
    if (!(f.rad_per_s() > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
  };

  positive(omega_a, "omega_a");
  positive(omega_m, "omega_m");
  positive(omega_b, "omega_b");
  if (omega_c) positive(*omega_c, "omega_c");
  finite(delta_a, "delta_a");
  finite(delta_m, "delta_m");
  finite(delta_c, "delta_c");
  non_negative(kappa_a, "kappa_a");
  non_negative(kappa_m, "kappa_m");
  non_negative(kappa_1, "kappa_1");
  non_negative(kappa_2, "kappa_2");
  non_negative(gamma_b, "gamma_b");
  finite(g_ma, "g_ma");
  finite(g_mb, "g_mb");
  finite(g_bc, "g_bc");
  if (!(temperature_k >= 0.0) || !std::isfinite(temperature_k)) throw ConfigError("temperature must be >= 0");
  if (!std::isfinite(phi)) throw ConfigError("phi must be finite");
  if (!(mechanical_q() > kMinMechanicalQ)) {
    throw ConfigError("mechanical quality factor omega_b/gamma_b = " + std::to_string(mechanical_q()) +
                      " must exceed " + std::to_string(kMinMechanicalQ) +
                      " for the Markovian Brownian-noise model");
  }

  if (const auto* m = std::get_if<MagnonDrivePhysical>(&drive.magnon)) {
    if (!(m->power_w >= 0.0)) throw ConfigError("drive.magnon.power_w must be >= 0");
    if (!(m->length_m > 0.0) || !(m->width_m > 0.0) || !(m->volume_m3 > 0.0)) {
      throw ConfigError("drive.magnon length, width and volume must be > 0");
    }
  } else if (!std::isfinite(std::get<MagnonDriveDirect>(drive.magnon).rabi.rad_per_s())) {
    throw ConfigError("drive.magnon.rabi_rad_s must be finite");
  }
  if (const auto* c = std::get_if<CavityDrivePhysical>(&drive.cavity)) {
    if (!(c->power_w >= 0.0)) throw ConfigError("drive.cavity.power_w must be >= 0");
    if (!(c->wavelength_m > 0.0)) throw ConfigError("drive.cavity.wavelength_m must be > 0");
  } else if (!std::isfinite(std::get<CavityDriveDirect>(drive.cavity).amplitude.rad_per_s())) {
    throw ConfigError("drive.cavity.amplitude_rad_s must be finite");
  }
  if (drive.g_mb_target && !(drive.g_mb_target->rad_per_s() >= 0.0)) throw ConfigError("g_mb target must be >= 0");
  if (drive.g_bc_target && !(drive.g_bc_target->rad_per_s() >= 0.0)) throw ConfigError("g_bc target must be >= 0");
}

// ---------------------------------------------------------------------------
// Scalar physics
// ---------------------------------------------------------------------------

/// Bose-Einstein occupation of a bath mode at `omega` and temperature `temperature_k`.
/// Exactly zero at T = 0.
inline double thermal_occupation(AngularFrequency omega, double temperature_k,
                                 const PhysicalConstants& k = {}) {
  if (!(omega.rad_per_s() > 0.0)) throw DomainError("thermal_occupation: omega must be > 0");
  if (!(temperature_k >= 0.0)) throw DomainError("thermal_occupation: temperature must be >= 0");
  if (temperature_k == 0.0) return 0.0;
  const double x = k.hbar * omega.rad_per_s() / (k.k_b * temperature_k);
  return 1.0 / std::expm1(x);
}

struct ThermalOccupations {
  double n_a = 0.0, n_m = 0.0, n_c = 0.0, n_b = 0.0;
};

inline ThermalOccupations thermal_occupations(const SystemParams& p) {
  return {thermal_occupation(p.omega_a, p.temperature_k, p.constants),
          thermal_occupation(p.omega_m, p.temperature_k, p.constants),
          thermal_occupation(p.optical_frequency(), p.temperature_k, p.constants),
          thermal_occupation(p.omega_b, p.temperature_k, p.constants)};
}

/// Microwave drive field amplitude sqrt(2 mu0 P0 / (l w c)). The result is
/// treated as a flux density in tesla so that gamma * H_d is a rate.
inline double drive_field_amplitude(double power_w, double length_m, double width_m,
                                    const PhysicalConstants& k = {}) {
  if (power_w < 0.0 || !(length_m > 0.0) || !(width_m > 0.0)) {
    throw DomainError("drive_field_amplitude: power must be >= 0 and dimensions > 0");
  }
  return std::sqrt(2.0 * k.mu_0 * power_w / (length_m * width_m * k.c_light));
}

/// Rabi frequency (sqrt(5)/4) gamma sqrt(N_s) H_d.
inline AngularFrequency rabi_frequency(double field_amplitude, double spin_number, double gamma_gyro) {
  if (field_amplitude < 0.0 || spin_number < 0.0 || gamma_gyro < 0.0) {
    throw DomainError("rabi_frequency: inputs must be >= 0");
  }
  return AngularFrequency(std::sqrt(5.0) / 4.0 * gamma_gyro * std::sqrt(spin_number) * field_amplitude);
}

/// Optical drive amplitude sqrt(2 kappa_c P_L / (hbar omega_L)), omega_L = 2 pi c / lambda_L.
inline AngularFrequency cavity_drive_amplitude(double power_w, double wavelength_m, AngularFrequency kappa_c,
                                               const PhysicalConstants& k = {}) {
  if (power_w < 0.0 || !(wavelength_m > 0.0) || kappa_c.rad_per_s() < 0.0) {
    throw DomainError("cavity_drive_amplitude: power, kappa_c must be >= 0 and wavelength > 0");
  }
  const double omega_l = two_pi * k.c_light / wavelength_m;
  return AngularFrequency(std::sqrt(2.0 * kappa_c.rad_per_s() * power_w / (k.hbar * omega_l)));
}

struct DriveAmplitudes {
  AngularFrequency rabi;    // Omega
  AngularFrequency cavity;  // E
};

inline DriveAmplitudes resolve_drives(const SystemParams& p) {
  DriveAmplitudes out;
  if (const auto* m = std::get_if<MagnonDrivePhysical>(&p.drive.magnon)) {
    const double h_d = drive_field_amplitude(m->power_w, m->length_m, m->width_m, p.constants);
    out.rabi = rabi_frequency(h_d, p.constants.rho_spin * m->volume_m3, p.constants.gamma_gyro);
  } else {
    out.rabi = std::get<MagnonDriveDirect>(p.drive.magnon).rabi;
  }
  if (const auto* c = std::get_if<CavityDrivePhysical>(&p.drive.cavity)) {
    out.cavity = cavity_drive_amplitude(c->power_w, c->wavelength_m, p.kappa_c(), p.constants);
  } else {
    out.cavity = std::get<CavityDriveDirect>(p.drive.cavity).amplitude;
  }
  return out;
}

/// Default operating point: red-detuned optical drive with kappa_c = omega_b at 20 mK.
inline SystemParams paper_defaults() {
  SystemParams p;
  p.omega_a = AngularFrequency::from_hz(10e9);
  p.omega_m = AngularFrequency::from_hz(10e9);
  p.omega_b = AngularFrequency::from_hz(40e6);
  p.delta_a = 0.1 * p.omega_b;
  p.delta_m = 0.1 * p.omega_b;
  p.delta_c = p.omega_b;
  p.kappa_a = AngularFrequency::from_hz(5e6);
  p.kappa_m = AngularFrequency::from_hz(2e6);
  p.kappa_1 = 0.9 * p.omega_b;
  p.kappa_2 = 0.1 * p.omega_b;
  p.gamma_b = AngularFrequency::from_hz(100.0);
  p.g_ma = AngularFrequency::from_hz(15e6);
  p.g_mb = AngularFrequency::from_hz(20.0);
  p.g_bc = AngularFrequency::from_hz(4e3);
  p.temperature_k = 20e-3;
  p.phi = 0.3 * std::numbers::pi;
  p.drive = DriveSpec{};
  return p;
}

}  // namespace omsq
