#pragma once

// Runtime self-check suite: structural invariants of the linear model,
// independent oracles for the spectrum, and the Parseval/Lyapunov cross-check
// on random stable operating points.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "omsq/covariance.hpp"
#include "omsq/dynamics.hpp"
#include "omsq/model.hpp"
#include "omsq/report.hpp"
#include "omsq/spectrum.hpp"
#include "omsq/steady_state.hpp"

namespace omsq {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

inline json to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  return json{{"passed", r.all_passed()}, {"checks", checks}};
}

/// The model with every light-matter coupling switched off.
inline SystemParams decoupled(SystemParams p) {
  p.g_ma = p.g_mb = p.g_bc = AngularFrequency(0.0);
  p.drive.g_mb_target.reset();
  p.drive.g_bc_target.reset();
  return p;
}

/// Random operating point in a broad physical range, with |G_mb| and |G_bc|
/// pinned by calibration targets; redrawn until the drift matrix is stable.
template <class Rng>
SystemParams random_stable_params(Rng& rng, const SystemParams& base = paper_defaults()) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto range = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  const AngularFrequency wb = base.omega_b;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    SystemParams p = base;
    p.frame = DetuningFrame::effective;
    p.delta_a = wb * range(-1.5, 1.5);
    p.delta_m = wb * range(-1.5, 1.5);
    p.delta_c = wb * range(0.2, 2.0);
    p.kappa_a = wb * range(0.05, 1.0);
    p.kappa_m = wb * range(0.05, 1.0);
    p.kappa_1 = wb * range(0.1, 1.5);
    p.kappa_2 = wb * range(0.0, 0.5);
    p.gamma_b = wb * std::pow(10.0, -range(3.0, 5.0));
    p.g_ma = wb * range(0.0, 0.6);
    p.temperature_k = range(0.0, 1.0);
    p.phi = range(0.0, 2.0 * std::numbers::pi);
    p.drive.magnon = MagnonDriveDirect{wb * 1e6};
    p.drive.cavity = CavityDriveDirect{wb * 1e6};
    p.drive.g_mb_target = wb * range(0.0, 0.4);
    p.drive.g_bc_target = wb * range(0.0, 0.6);
    const SteadyState ss = solve_steady_state(p);
    if (stability_analysis(build_drift_matrix(p, ss)).stable) return p;
  }
  throw NumericalError("random_stable_params: no stable draw found");
}

namespace detail {

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Swaps each (o, o+) channel pair of a row vector.
inline RowVector9c swap_channels(const RowVector9c& v) {
  RowVector9c out;
  for (int k = 0; k < 9; ++k) out(conjugate_channel(k)) = v(k);
  return out;
}

inline ValidationCheck make_check(std::string name, double residual, double tolerance, std::string detail = {}) {
  return {std::move(name), residual <= tolerance, residual, tolerance, std::move(detail)};
}

}  // namespace detail

inline constexpr double kParsevalTolerance = 1e-3;

/// Parseval cross-check on the phase-phi quadrature of the optical mode.
inline ParsevalCheck parseval_for(const SystemParams& p) {
  const SteadyState ss = solve_steady_state(p);
  const SpectrumEngine engine(p, ss);
  return parseval_check(engine, quadrature_weights(kC, p.phi));
}

/// Runs every invariant and oracle check at `p` plus `draws` random stable points.
inline ValidationReport run_validation(const SystemParams& p, std::uint64_t seed, int draws = 20) {
  ValidationReport rep;
  auto& out = rep.checks;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double pi = std::numbers::pi;

  // Shot-noise anchor: the undriven cavity reflects vacuum.
  {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      SystemParams q = decoupled(p);
      q.temperature_k = 2.0 * u(rng);
      const SteadyState ss = solve_steady_state(q);
      const SpectrumEngine engine(q, ss);
      const double w = -5.0 + 10.0 * u(rng);
      const double phi = 2.0 * pi * u(rng);
      worst = std::max(worst, std::abs(engine(w, phi) - kShotNoise));
    }
    out.push_back(detail::make_check("shot_noise_anchor", worst, 1e-12, "100 random (omega, phi, T) draws"));
  }

  SteadyState ss;
  try {
    ss = solve_steady_state(p);
  } catch (const std::exception& e) {
    out.push_back({"steady_state", false, 0.0, 0.0, e.what()});
    return rep;
  }
  const SpectrumEngine engine(p, ss);
  const Matrix8c& a = engine.drift().entries;
  const StabilityReport st = stability_analysis(engine.drift());
  out.push_back({"stability", st.stable, st.margin, 0.0, "largest eigenvalue real part (omega_b units) < 0"});

  // Conjugation symmetry of A.
  {
    Matrix8c swapped;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) swapped(i, j) = std::conj(a(conjugate_mode(i), conjugate_mode(j)));
    }
    out.push_back(detail::make_check("drift_conjugation_symmetry", detail::max_abs(swapped - a), 1e-14));
  }
  // Eigenvalues in conjugate pairs.
  {
    std::vector<cplx> conj_ev;
    for (const cplx& z : st.eigenvalues) conj_ev.push_back(std::conj(z));
    double worst = 0.0;
    for (const cplx& z : conj_ev) {
      double best = std::numeric_limits<double>::infinity();
      for (const cplx& y : st.eigenvalues) best = std::min(best, std::abs(z - y));
      worst = std::max(worst, best);
    }
    out.push_back(detail::make_check("eigenvalue_conjugate_pairing", worst, 1e-10));
  }
  // Trace identity.
  {
    const double wb = p.omega_b.rad_per_s();
    const double expected = -(p.kappa_a + p.kappa_m + p.kappa_c() + p.gamma_b).rad_per_s() / wb;
    const cplx tr = a.trace();
    out.push_back(detail::make_check("trace_identity", std::abs(tr - expected) / std::abs(expected), 1e-12));
  }

  const std::vector<double> probe{0.0, 0.3, 0.65, 1.0, 2.5};
  // Transfer-matrix row symmetry and the dense-inverse oracle.
  {
    double sym = 0.0, dense = 0.0;
    for (double w : probe) {
      const TransferMatrix tp = engine.transfer(w);
      const TransferMatrix tm = engine.transfer(-w);
      for (int r = 0; r < 8; ++r) {
        const RowVector9c expect = detail::swap_channels(tm.entries.row(conjugate_mode(r)).conjugate());
        sym = std::max(sym, detail::max_abs(tp.entries.row(r) - expect));
      }
      const Matrix8c inv = (cplx(0.0, -w) * Matrix8c::Identity() - a).inverse();
      const Matrix89c oracle = inv * engine.noise().injection;
      dense = std::max(dense, detail::max_abs(oracle - tp.entries) / std::max(1.0, detail::max_abs(oracle)));
    }
    out.push_back(detail::make_check("transfer_row_conjugation_symmetry", sym, 1e-10));
    out.push_back(detail::make_check("transfer_dense_inverse_oracle", dense, 1e-10));
  }
  // Quadrature hermiticity.
  {
    double worst = 0.0;
    for (double w : probe) {
      const RowVector9c vp = engine.quadrature(w, p.phi);
      const RowVector9c vm = engine.quadrature(-w, p.phi);
      worst = std::max(worst, detail::max_abs(vm - detail::swap_channels(vp.conjugate())));
    }
    out.push_back(detail::make_check("quadrature_hermiticity", worst, 1e-10));
  }

  if (st.stable) {
    double gap = 0.0, imag = 0.0, negative = 0.0, period = 0.0, norm = 0.0;
    const SpectrumEngine raw(p, ss, 1.0);
    const SpectrumEngine mhz(p, ss, two_pi * 1e6);
    const double wb = p.omega_b.rad_per_s();
    for (int i = 0; i < 50; ++i) {
      const double w = 3.0 * u(rng);
      const double phi = 2.0 * pi * u(rng);
      const SpectralPoint sp = engine.evaluate(w, phi);
      gap = std::max(gap, sp.symmetrization_gap / std::max(1.0, sp.value));
      imag = std::max(imag, std::abs(sp.imag_residual));
      negative = std::max(negative, -sp.value);
      period = std::max(period, std::abs(engine(w, phi + pi) - sp.value));
      const double s_raw = raw(w * wb, phi);
      const double s_mhz = mhz(w * wb / (two_pi * 1e6), phi);
      norm = std::max({norm, std::abs(s_raw - sp.value) / sp.value, std::abs(s_mhz - sp.value) / sp.value});
    }
    out.push_back(detail::make_check("symmetrization_equivalence", gap, 1e-12));
    out.push_back(detail::make_check("spectrum_reality", imag, 1e-10));
    out.push_back(detail::make_check("spectrum_positivity", negative, 1e-10));
    out.push_back(detail::make_check("phase_periodicity", period, 1e-12));
    out.push_back(detail::make_check("normalization_invariance", norm, 1e-10, "rad/s and 2pi MHz units vs omega_b units"));

    try {
      const ParsevalCheck pc = parseval_for(p);
      out.push_back(detail::make_check("parseval_configured", pc.relative_error, kParsevalTolerance,
                                       "lyapunov " + std::to_string(pc.lyapunov) + ", spectral " +
                                           std::to_string(pc.spectral)));
    } catch (const std::exception& e) {
      out.push_back({"parseval_configured", false, 0.0, kParsevalTolerance, e.what()});
    }
  }

  // High-frequency rolloff of T.
  {
    const double w = 1e6;
    const double ratio = detail::max_abs(engine.transfer(w).entries) / detail::max_abs(engine.noise().injection);
    out.push_back(detail::make_check("transfer_high_frequency_rolloff", ratio, 1e-5,
                                     "|T| / |M| at omega = 1e6 omega_b"));
  }

  // Lossless reflection: no coupling, no second port.
  {
    SystemParams q = decoupled(p);
    q.kappa_2 = AngularFrequency(0.0);
    const SteadyState sq = solve_steady_state(q);
    const SpectrumEngine e(q, sq);
    double worst = 0.0;
    for (double w : probe) {
      const TransferMatrix t = e.transfer(w);
      const cplx r = std::sqrt(e.kappa_1()) * t.entries(kC, kC1in) - 1.0;
      worst = std::max({worst, std::abs(std::abs(r) - 1.0), std::abs(e(w, q.phi) - kShotNoise)});
    }
    out.push_back(detail::make_check("lossless_reflection", worst, 1e-12));
  }

  // Parseval on random stable draws.
  {
    double worst = 0.0;
    std::string failure;
    for (int i = 0; i < draws; ++i) {
      try {
        worst = std::max(worst, parseval_for(random_stable_params(rng, p)).relative_error);
      } catch (const std::exception& e) {
        failure = e.what();
        worst = std::numeric_limits<double>::infinity();
      }
    }
    ValidationCheck c = detail::make_check("parseval_random_draws", worst, kParsevalTolerance,
                                           std::to_string(draws) + " random stable draws");
    if (!failure.empty()) c.detail += "; " + failure;
    out.push_back(c);
  }
  return rep;
}

}  // namespace omsq
