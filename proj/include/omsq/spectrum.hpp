#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "omsq/dynamics.hpp"
#include "omsq/errors.hpp"
#include "omsq/model.hpp"
#include "omsq/steady_state.hpp"

namespace omsq {

/// Shot-noise level of the symmetrized quadrature spectrum.
inline constexpr double kShotNoise = 0.5;

inline constexpr double kMaxConditionNumber = 1e12;
inline constexpr double kImagTolerance = 1e-10;
inline constexpr double kNegativeTolerance = 1e-10;

/// T(w) = (-i w I - A)^-1 M at one frequency (matrix unit).
struct TransferMatrix {
  double omega = 0.0;
  Matrix89c entries;
};

inline TransferMatrix transfer_matrix(const DriftMatrix& a, const Matrix89c& injection, double omega) {
  const Matrix8c resolvent = cplx(0.0, -omega) * Matrix8c::Identity() - a.entries;
  const Eigen::PartialPivLU<Matrix8c> lu(resolvent);
  const double rcond = lu.rcond();
  if (!(rcond * kMaxConditionNumber > 1.0)) {
    throw SingularSystem("resolvent (-i w I - A) is singular at w = " + std::to_string(omega) +
                             " (condition estimate " + std::to_string(1.0 / rcond) + ")",
                         omega);
  }
  return {omega, lu.solve(injection)};
}

/// Output-quadrature coefficients v(w): dW(w) = v(w) . n(w).
///
/// The conjugate output field is taken from the delta c+ row at the same
/// argument w, i.e. the transform of the hermitian time-domain quadrature.
inline RowVector9c quadrature_coefficients(const TransferMatrix& t, double phi, double kappa_1) {
  const double s1 = std::sqrt(kappa_1);
  RowVector9c out_c = s1 * t.entries.row(kC);
  RowVector9c out_cdag = s1 * t.entries.row(kCdag);
  out_c(kC1in) -= 1.0;
  out_cdag(kC1inDag) -= 1.0;
  const cplx rot = std::polar(1.0, -phi);
  return (rot * out_c + std::conj(rot) * out_cdag) / std::sqrt(2.0);
}

/// Detailed evaluation of S(w), including both symmetrization routes.
struct SpectralPoint {
  double value = 0.0;             // S(w), real part
  double imag_residual = 0.0;     // imaginary part discarded
  double symmetrization_gap = 0.0;  // |v C_sym v'^T - (v C v'^T + v' C v^T)/2|
};

/// Precomputed drift, noise and output coupling for repeated spectrum
/// evaluations at one operating point. Frequencies are in the matrix unit.
class SpectrumEngine {
 public:
  SpectrumEngine(DriftMatrix drift, NoiseModel noise, double kappa_1)
      : drift_(std::move(drift)), noise_(std::move(noise)), kappa_1_(kappa_1) {}

  SpectrumEngine(const SystemParams& p, const SteadyState& ss, double unit_rad_s)
      : SpectrumEngine(build_drift_matrix(p, ss, unit_rad_s), build_noise_model(p, unit_rad_s),
                       p.kappa_1.rad_per_s() / unit_rad_s) {}

  SpectrumEngine(const SystemParams& p, const SteadyState& ss)
      : SpectrumEngine(p, ss, p.omega_b.rad_per_s()) {}

  const DriftMatrix& drift() const { return drift_; }
  const NoiseModel& noise() const { return noise_; }
  double kappa_1() const { return kappa_1_; }
  double unit_rad_s() const { return drift_.unit_rad_s; }

  TransferMatrix transfer(double omega) const { return transfer_matrix(drift_, noise_.injection, omega); }

  RowVector9c quadrature(double omega, double phi) const {
    return quadrature_coefficients(transfer(omega), phi, kappa_1_);
  }

  SpectralPoint evaluate(double omega, double phi) const {
    const RowVector9c vp = quadrature(omega, phi);
    const RowVector9c vm = quadrature(-omega, phi);
    const cplx sym = (vp * noise_.symmetrized * vm.transpose())(0, 0);
    const cplx raw = 0.5 * ((vp * noise_.correlations * vm.transpose())(0, 0) +
                            (vm * noise_.correlations * vp.transpose())(0, 0));
    SpectralPoint out;
    out.value = sym.real();
    out.imag_residual = sym.imag();
    out.symmetrization_gap = std::abs(sym - raw);
    if (std::abs(out.imag_residual) > kImagTolerance * std::max(1.0, std::abs(out.value))) {
      throw NumericalError("noise spectral density has a non-negligible imaginary part " +
                           std::to_string(out.imag_residual) + " at w = " + std::to_string(omega));
    }
    if (out.value < -kNegativeTolerance) {
      throw NumericalError("noise spectral density is negative (" + std::to_string(out.value) +
                           ") at w = " + std::to_string(omega));
    }
    out.value = std::max(out.value, 0.0);
    return out;
  }

  double operator()(double omega, double phi) const { return evaluate(omega, phi).value; }

 private:
  DriftMatrix drift_;
  NoiseModel noise_;
  double kappa_1_;
};

/// Symmetrized output-quadrature noise spectral density at a physical frequency.
inline double noise_spectral_density(const SystemParams& p, const SteadyState& ss, AngularFrequency omega,
                                     double phi) {
  const SpectrumEngine engine(p, ss);
  return engine(omega.rad_per_s() / engine.unit_rad_s(), phi);
}

inline double to_decibels(double s) {
  if (!(s > 0.0)) throw DomainError("to_decibels: spectral density must be > 0");
  return 10.0 * std::log10(s / kShotNoise);
}

struct SqueezingBand {
  double lo = 0.0;
  double hi = 0.0;
};

struct SpectrumResult {
  std::vector<double> omegas;  // matrix unit
  std::vector<double> values;
  double s_min = 0.0;
  double omega_at_min = 0.0;
  std::optional<SqueezingBand> band;  // contiguous S < 1/2 around the minimum
  double bandwidth = 0.0;
  double unit_rad_s = 1.0;

  AngularFrequency bandwidth_rad() const { return AngularFrequency(bandwidth * unit_rad_s); }
};

/// Locates the minimum and the contiguous sub-shot-noise band around it;
/// band edges are refined by linear interpolation of the S = 1/2 crossings.
inline void extract_band(SpectrumResult& r) {
  const auto& w = r.omegas;
  const auto& s = r.values;
  const std::size_t imin = static_cast<std::size_t>(std::min_element(s.begin(), s.end()) - s.begin());
  r.s_min = s[imin];
  r.omega_at_min = w[imin];
  r.band.reset();
  r.bandwidth = 0.0;
  // Rounding-level dips below shot noise (a decoupled field) are not squeezing.
  const double threshold = kShotNoise * (1.0 - 1e-12);
  if (!(r.s_min < threshold)) return;

  std::size_t lo = imin, hi = imin;
  while (lo > 0 && s[lo - 1] < threshold) --lo;
  while (hi + 1 < s.size() && s[hi + 1] < threshold) ++hi;

  auto crossing = [&](std::size_t outside, std::size_t inside) {
    return w[outside] + (kShotNoise - s[outside]) * (w[inside] - w[outside]) / (s[inside] - s[outside]);
  };
  SqueezingBand b;
  b.lo = lo > 0 ? crossing(lo - 1, lo) : w.front();
  b.hi = hi + 1 < s.size() ? crossing(hi + 1, hi) : w.back();
  r.band = b;
  r.bandwidth = b.hi - b.lo;
}

inline SpectrumResult spectrum_curve(const SpectrumEngine& engine, std::span<const double> grid, double phi) {
  if (grid.empty()) throw DomainError("spectrum_curve: empty frequency grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("spectrum_curve: grid must be strictly increasing");
  }
  SpectrumResult r;
  r.unit_rad_s = engine.unit_rad_s();
  r.omegas.assign(grid.begin(), grid.end());
  r.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      r.values[i] = engine(grid[i], phi);
    } catch (const NumericalError& e) {
      throw NumericalError("at grid index " + std::to_string(i) + ": " + e.what());
    }
  }
  extract_band(r);
  return r;
}

inline SpectrumResult spectrum_curve(const SystemParams& p, const SteadyState& ss, std::span<const double> grid,
                                     double phi) {
  return spectrum_curve(SpectrumEngine(p, ss), grid, phi);
}

/// `points` uniformly spaced values on [lo, hi].
inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

}  // namespace omsq
