#pragma once

#include <algorithm>
#include <complex>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "omsq/errors.hpp"
#include "omsq/model.hpp"
#include "omsq/steady_state.hpp"

namespace omsq {

using Matrix8c = Eigen::Matrix<cplx, 8, 8>;
using Matrix89c = Eigen::Matrix<cplx, 8, 9>;
using Matrix9d = Eigen::Matrix<double, 9, 9>;
using RowVector8c = Eigen::Matrix<cplx, 1, 8>;
using RowVector9c = Eigen::Matrix<cplx, 1, 9>;

/// Fluctuation basis (delta a, delta a+, delta m, delta m+, delta c, delta c+, delta q, delta p).
enum Mode : int { kA = 0, kAdag, kM, kMdag, kC, kCdag, kQ, kP };

/// Independent input-noise channels.
enum Channel : int { kAin = 0, kAinDag, kMin, kMinDag, kC1in, kC1inDag, kC2in, kC2inDag, kXi };

/// Partner of a mode under hermitian conjugation (q, p are self-adjoint).
constexpr int conjugate_mode(int i) { return i < kQ ? (i ^ 1) : i; }
constexpr int conjugate_channel(int k) { return k < kXi ? (k ^ 1) : k; }

/// Linear generator of the fluctuations. Entries are in units of `unit_rad_s`
/// (omega_b unless built otherwise).
struct DriftMatrix {
  Matrix8c entries;
  double unit_rad_s = 1.0;
};

struct NoiseModel {
  Matrix89c injection;    // M: channel -> fluctuation equation
  Matrix9d correlations;  // raw coefficient of delta(w+w') in <n_i(w) n_j(w')>
  Matrix9d symmetrized;   // (C + C^T) / 2
  double unit_rad_s = 1.0;
};

/// Assembles A row by row from the linearized Langevin equations. Dagger rows
/// are the conjugates of the annihilation rows with columns swapped.
inline DriftMatrix build_drift_matrix(const SystemParams& p, const SteadyState& ss, double unit_rad_s) {
  const double u = unit_rad_s;
  const cplx I(0.0, 1.0);
  const double ka = p.kappa_a.rad_per_s() / u;
  const double km = p.kappa_m.rad_per_s() / u;
  const double kc = p.kappa_c().rad_per_s() / u;
  const double da = p.delta_a.rad_per_s() / u;
  const double dm = ss.delta_m_eff.rad_per_s() / u;
  const double dc = ss.delta_c_eff.rad_per_s() / u;
  const double gma = p.g_ma.rad_per_s() / u;
  const double wb = p.omega_b.rad_per_s() / u;
  const double gb = p.gamma_b.rad_per_s() / u;
  const cplx Gmb = ss.G_mb / u;
  const cplx Gbc = ss.G_bc / u;

  Matrix8c a = Matrix8c::Zero();
  a(kA, kA) = -I * da - ka / 2.0;
  a(kA, kM) = -I * gma;

  a(kM, kM) = -I * dm - km / 2.0;
  a(kM, kA) = -I * gma;
  a(kM, kQ) = -I * Gmb;

  a(kC, kC) = -I * dc - kc / 2.0;
  a(kC, kQ) = I * Gbc;

  for (int r : {kA, kM, kC}) {
    for (int c = 0; c < 8; ++c) a(r + 1, conjugate_mode(c)) = std::conj(a(r, c));
  }

  a(kQ, kP) = wb;

  a(kP, kQ) = -wb;
  a(kP, kP) = -gb;
  a(kP, kM) = -std::conj(Gmb);
  a(kP, kMdag) = -Gmb;
  a(kP, kC) = std::conj(Gbc);
  a(kP, kCdag) = Gbc;

  return {a, unit_rad_s};
}

inline DriftMatrix build_drift_matrix(const SystemParams& p, const SteadyState& ss) {
  return build_drift_matrix(p, ss, p.omega_b.rad_per_s());
}

inline NoiseModel build_noise_model(const SystemParams& p, double unit_rad_s) {
  const double u = unit_rad_s;
  const ThermalOccupations n = thermal_occupations(p);

  NoiseModel out;
  out.unit_rad_s = u;
  out.injection.setZero();
  const double sa = std::sqrt(p.kappa_a.rad_per_s() / u);
  const double sm = std::sqrt(p.kappa_m.rad_per_s() / u);
  const double s1 = std::sqrt(p.kappa_1.rad_per_s() / u);
  const double s2 = std::sqrt(p.kappa_2.rad_per_s() / u);
  out.injection(kA, kAin) = sa;
  out.injection(kAdag, kAinDag) = sa;
  out.injection(kM, kMin) = sm;
  out.injection(kMdag, kMinDag) = sm;
  out.injection(kC, kC1in) = s1;
  out.injection(kCdag, kC1inDag) = s1;
  out.injection(kC, kC2in) = s2;
  out.injection(kCdag, kC2inDag) = s2;
  out.injection(kP, kXi) = 1.0;

  // <o o+> = N + 1, <o+ o> = N for every bosonic bath.
  out.correlations.setZero();
  const std::pair<int, double> baths[] = {{kAin, n.n_a}, {kMin, n.n_m}, {kC1in, n.n_c}, {kC2in, n.n_c}};
  for (const auto& [ch, occ] : baths) {
    out.correlations(ch, ch + 1) = occ + 1.0;
    out.correlations(ch + 1, ch) = occ;
  }
  out.correlations(kXi, kXi) = p.gamma_b.rad_per_s() / u * (2.0 * n.n_b + 1.0);
  out.symmetrized = 0.5 * (out.correlations + out.correlations.transpose());
  return out;
}

inline NoiseModel build_noise_model(const SystemParams& p) { return build_noise_model(p, p.omega_b.rad_per_s()); }

struct StabilityReport {
  bool stable = false;
  double margin = 0.0;  // largest real part, matrix unit
  std::vector<cplx> eigenvalues;  // sorted by (real, imag)
};

inline StabilityReport stability_analysis(const DriftMatrix& a) {
  Eigen::ComplexEigenSolver<Matrix8c> solver(a.entries, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigenvalue computation failed for drift matrix\n" << a.entries;
    throw NumericalError(os.str());
  }
  StabilityReport r;
  const auto& ev = solver.eigenvalues();
  r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  r.margin = -std::numeric_limits<double>::infinity();
  for (const cplx& e : r.eigenvalues) r.margin = std::max(r.margin, e.real());
  r.stable = r.margin < 0.0;
  return r;
}

}  // namespace omsq
