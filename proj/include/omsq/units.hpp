#pragma once

// Physical constants and the angular-frequency convention shared by every
// module. All rates (frequencies, detunings, decays, couplings, drives) are
// carried internally in rad/s; the linear algebra works in units of the
// phonon frequency omega_b.

#include <cmath>
#include <compare>
#include <numbers>
#include <string>
#include <vector>

#include "omsq/errors.hpp"

namespace omsq {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct PhysicalConstants {
  double hbar = 1.054571817e-34;                  // J s
  double k_b = 1.380649e-23;                      // J / K
  double mu_0 = 4.0e-7 * std::numbers::pi;        // T m / A
  double c_light = 299792458.0;                   // m / s
  double gamma_gyro = two_pi * 28.0e9;            // rad s^-1 T^-1, electron
  double rho_spin = 4.22e27;                      // spins / m^3, YIG

  /// Names of fields changed from their defaults, in declaration order.
  std::vector<std::string> overridden() const {
    const PhysicalConstants d{};
    std::vector<std::string> out;
    if (hbar != d.hbar) out.emplace_back("hbar");
    if (k_b != d.k_b) out.emplace_back("k_b");
    if (mu_0 != d.mu_0) out.emplace_back("mu_0");
    if (c_light != d.c_light) out.emplace_back("c_light");
    if (gamma_gyro != d.gamma_gyro) out.emplace_back("gamma_gyro");
    if (rho_spin != d.rho_spin) out.emplace_back("rho_spin");
    return out;
  }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string("constant '") + name + "' must be finite and > 0");
      }
    };
    positive(hbar, "hbar");
    positive(k_b, "k_b");
    positive(mu_0, "mu_0");
    positive(c_light, "c_light");
    positive(gamma_gyro, "gamma_gyro");
    positive(rho_spin, "rho_spin");
  }
};

/// An angular frequency or rate in rad/s.
class AngularFrequency {
 public:
  constexpr AngularFrequency() = default;
  constexpr explicit AngularFrequency(double rad_per_s) : value_(rad_per_s) {}

  /// Converts an ordinary frequency; the 2*pi factor is applied here and nowhere else.
  static constexpr AngularFrequency from_hz(double hz) { return AngularFrequency(two_pi * hz); }

  constexpr double rad_per_s() const { return value_; }
  constexpr double hz() const { return value_ / two_pi; }

  constexpr AngularFrequency operator-() const { return AngularFrequency(-value_); }
  constexpr AngularFrequency operator+(AngularFrequency o) const { return AngularFrequency(value_ + o.value_); }
  constexpr AngularFrequency operator-(AngularFrequency o) const { return AngularFrequency(value_ - o.value_); }
  constexpr AngularFrequency operator*(double s) const { return AngularFrequency(value_ * s); }
  friend constexpr AngularFrequency operator*(double s, AngularFrequency f) { return f * s; }
  constexpr AngularFrequency operator/(double s) const { return AngularFrequency(value_ / s); }

  constexpr auto operator<=>(const AngularFrequency&) const = default;

 private:
  double value_ = 0.0;
};

/// Expresses `x` in units of the phonon frequency.
inline double to_omega_b_units(AngularFrequency x, AngularFrequency omega_b) {
  if (omega_b.rad_per_s() == 0.0) throw DomainError("to_omega_b_units: omega_b must be nonzero");
  if (omega_b.rad_per_s() < 0.0) throw DomainError("to_omega_b_units: omega_b must be positive");
  return x.rad_per_s() / omega_b.rad_per_s();
}

inline AngularFrequency from_omega_b_units(double x, AngularFrequency omega_b) { return omega_b * x; }

}  // namespace omsq
