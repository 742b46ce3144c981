#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "omsq/errors.hpp"
#include "omsq/model.hpp"

namespace omsq {

using cplx = std::complex<double>;

struct SteadyState {
  cplx m_avg;           // <m>
  cplx c_avg;           // <c>
  double q_avg = 0.0;   // <q>, dimensionless displacement
  AngularFrequency delta_m_eff, delta_c_eff;    // detunings entering the fluctuation dynamics
  AngularFrequency delta_m_bare, delta_c_bare;  // rotating-frame detunings
  cplx G_mb, G_bc;      // effective couplings, rad/s
  int iterations = 0;
  double residual = 0.0;  // |F(<q>) - <q>| / max(1, |<q>|)
  double magnon_scale = 1.0;  // calibration factor applied to <m>
  double cavity_scale = 1.0;  // calibration factor applied to <c>
};

struct SteadyStateOptions {
  double tolerance = 1e-12;
  int max_iterations = 1000;
  double damping = 0.5;               // used when the undamped iteration oscillates
  double singular_threshold = 1e-30;  // |denominator| floor in omega_b units
  bool check_multistability = true;
};

struct EffectiveCouplings {
  cplx G_mb, G_bc;
  double magnon_scale = 1.0;
  double cavity_scale = 1.0;
};

namespace detail {

// Everything in omega_b units.
struct SteadyStateKernel {
  double kappa_a, kappa_m, kappa_c;
  double delta_a, delta_m, delta_c;
  double g_ma, g_mb, g_bc;
  cplx rabi, drive;
  double singular_threshold;

  SteadyStateKernel(const SystemParams& p, const DriveAmplitudes& d, double singular) {
    const double wb = p.omega_b.rad_per_s();
    kappa_a = p.kappa_a.rad_per_s() / wb;
    kappa_m = p.kappa_m.rad_per_s() / wb;
    kappa_c = p.kappa_c().rad_per_s() / wb;
    delta_a = p.delta_a.rad_per_s() / wb;
    delta_m = p.delta_m.rad_per_s() / wb;
    delta_c = p.delta_c.rad_per_s() / wb;
    g_ma = p.g_ma.rad_per_s() / wb;
    g_mb = p.g_mb.rad_per_s() / wb;
    g_bc = p.g_bc.rad_per_s() / wb;
    rabi = d.rabi.rad_per_s() / wb;
    drive = d.cavity.rad_per_s() / wb;
    singular_threshold = singular;
  }

  cplx magnon(double delta_m_eff) const {
    const cplx za(kappa_a / 2.0, delta_a);
    const cplx den = g_ma * g_ma + cplx(kappa_m / 2.0, delta_m_eff) * za;
    if (std::abs(den) < singular_threshold) {
      throw SingularDenominator("steady state: magnon denominator vanishes (|den| = " +
                                std::to_string(std::abs(den)) + ")");
    }
    return rabi * za / den;
  }

  cplx cavity(double delta_c_eff) const {
    const cplx den(kappa_c / 2.0, delta_c_eff);
    if (std::abs(den) < singular_threshold) {
      throw SingularDenominator("steady state: optical denominator vanishes");
    }
    return drive / den;
  }

  double displacement(cplx m, cplx c) const { return g_bc * std::norm(c) - g_mb * std::norm(m); }

  // Right-hand side of the displacement equation when detunings are bare.
  double map(double q) const {
    return displacement(magnon(delta_m + g_mb * q), cavity(delta_c - g_bc * q));
  }

  // Largest |<m>|^2 over all effective magnon detunings (infinite if a pole can be reached).
  double max_magnon_norm() const {
    const cplx za(kappa_a / 2.0, delta_a);
    if (std::abs(za) == 0.0 || rabi == 0.0) return 0.0;
    const cplx p0 = g_ma * g_ma + (kappa_m / 2.0) * za;
    const cplx dir = cplx(0.0, 1.0) * za;
    const double dmin = std::abs(std::imag(p0 * std::conj(dir))) / std::abs(dir);
    if (dmin == 0.0) return std::numeric_limits<double>::infinity();
    return std::norm(rabi) * std::norm(za) / (dmin * dmin);
  }
};

inline int count_displacement_roots(const SteadyStateKernel& k) {
  const double max_c = k.kappa_c > 0.0 ? std::norm(k.drive) / (k.kappa_c * k.kappa_c / 4.0)
                                       : (k.drive == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  const double max_m = k.max_magnon_norm();
  const double hi = std::abs(k.g_bc) * max_c;
  const double lo = -std::abs(k.g_mb) * max_m;
  if (!std::isfinite(hi) || !std::isfinite(lo)) return 1;  // cannot bracket; leave to the iteration
  if (hi - lo <= 0.0) return 1;

  double width = hi - lo;
  if (k.g_bc != 0.0 && k.kappa_c > 0.0) width = std::min(width, k.kappa_c / 2.0 / std::abs(k.g_bc));
  if (k.g_mb != 0.0 && k.rabi != 0.0) {
    const cplx za(k.kappa_a / 2.0, k.delta_a);
    const cplx p0 = k.g_ma * k.g_ma + (k.kappa_m / 2.0) * za;
    const cplx dir = cplx(0.0, 1.0) * za;
    const double dmin = std::abs(std::imag(p0 * std::conj(dir))) / std::abs(dir);
    width = std::min(width, dmin / std::abs(za) / std::abs(k.g_mb));
  }
  constexpr long kMinSamples = 1000;
  constexpr long kMaxSamples = 200000;
  const long n = std::clamp(static_cast<long>((hi - lo) / (width / 8.0)), kMinSamples, kMaxSamples);

  int roots = 0;
  double prev = k.map(lo) - lo;
  for (long i = 1; i <= n; ++i) {
    const double q = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    const double h = k.map(q) - q;
    if ((prev > 0.0 && h <= 0.0) || (prev < 0.0 && h >= 0.0)) ++roots;
    if (h != 0.0) prev = h;
  }
  return std::max(roots, 1);
}

struct FixedPointOutcome {
  double q = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

inline FixedPointOutcome iterate_displacement(const SteadyStateKernel& k, double relax,
                                              const SteadyStateOptions& opt) {
  FixedPointOutcome out;
  double q = 0.0;
  int growth_streak = 0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const double f = k.map(q);
    const double res = std::abs(f - q);
    out.history.push_back(res / std::max(1.0, std::abs(q)));
    if (out.history.size() > 1 && out.history.back() > out.history[out.history.size() - 2]) {
      if (++growth_streak >= 5 && relax == 1.0) break;  // oscillating; caller retries damped
    } else {
      growth_streak = 0;
    }
    const double next = q + relax * (f - q);
    const double step = std::abs(next - q);
    q = next;
    out.iterations = it;
    if (step <= opt.tolerance * std::max(std::abs(q), std::abs(f)) || step == 0.0) {
      out.converged = true;
      break;
    }
    if (!std::isfinite(q)) break;
  }
  out.q = q;
  return out;
}

}  // namespace detail

/// Applies the calibration overrides of `p.drive` to a solved state: the
/// returned couplings are g<m>, g<c> unless a target magnitude is set, in
/// which case the amplitude is rescaled (phase kept) to hit it.
inline EffectiveCouplings effective_couplings(const SteadyState& ss, const SystemParams& p) {
  EffectiveCouplings out;
  out.G_mb = p.g_mb.rad_per_s() * ss.m_avg;
  out.G_bc = p.g_bc.rad_per_s() * ss.c_avg;
  if (p.drive.g_mb_target) {
    const double now = std::abs(out.G_mb);
    if (now == 0.0) throw ConfigError("cannot calibrate |G_mb|: the magnon drive or g_mb is zero");
    out.magnon_scale = p.drive.g_mb_target->rad_per_s() / now;
    out.G_mb *= out.magnon_scale;
  }
  if (p.drive.g_bc_target) {
    const double now = std::abs(out.G_bc);
    if (now == 0.0) throw ConfigError("cannot calibrate |G_bc|: the optical drive or g_bc is zero");
    out.cavity_scale = p.drive.g_bc_target->rad_per_s() / now;
    out.G_bc *= out.cavity_scale;
  }
  return out;
}

namespace detail {

inline SteadyState solve_uncalibrated(const SystemParams& p, const DriveAmplitudes& drives,
                                      const SteadyStateOptions& opt) {
  const SteadyStateKernel k(p, drives, opt.singular_threshold);
  const double wb = p.omega_b.rad_per_s();
  SteadyState ss;

  if (p.frame == DetuningFrame::effective) {
    ss.m_avg = k.magnon(k.delta_m);
    ss.c_avg = k.cavity(k.delta_c);
    ss.q_avg = k.displacement(ss.m_avg, ss.c_avg);
    ss.iterations = 1;
    ss.residual = 0.0;
    ss.delta_m_eff = p.delta_m;
    ss.delta_c_eff = p.delta_c;
    ss.delta_m_bare = p.delta_m - p.g_mb * ss.q_avg;
    ss.delta_c_bare = p.delta_c + p.g_bc * ss.q_avg;
  } else {
    if (opt.check_multistability) {
      const int roots = count_displacement_roots(k);
      if (roots > 1) {
        throw NonConvergence("steady state is multistable (" + std::to_string(roots) +
                                 " displacement branches); no branch is selected",
                             {});
      }
    }
    FixedPointOutcome fp = iterate_displacement(k, 1.0, opt);
    if (!fp.converged) {
      FixedPointOutcome damped = iterate_displacement(k, opt.damping, opt);
      damped.history.insert(damped.history.begin(), fp.history.begin(), fp.history.end());
      damped.iterations += fp.iterations;
      fp = std::move(damped);
    }
    if (!fp.converged) {
      throw NonConvergence("steady-state fixed point did not converge after " +
                               std::to_string(fp.iterations) + " iterations",
                           fp.history);
    }
    const double q = fp.q;
    const double dm = k.delta_m + k.g_mb * q;
    const double dc = k.delta_c - k.g_bc * q;
    ss.m_avg = k.magnon(dm);
    ss.c_avg = k.cavity(dc);
    ss.q_avg = q;
    ss.iterations = fp.iterations;
    ss.residual = std::abs(k.displacement(ss.m_avg, ss.c_avg) - q) / std::max(1.0, std::abs(q));
    ss.delta_m_eff = AngularFrequency(dm * wb);
    ss.delta_c_eff = AngularFrequency(dc * wb);
    ss.delta_m_bare = p.delta_m;
    ss.delta_c_bare = p.delta_c;
  }
  ss.G_mb = p.g_mb.rad_per_s() * ss.m_avg;
  ss.G_bc = p.g_bc.rad_per_s() * ss.c_avg;
  return ss;
}

}  // namespace detail

/// Mean fields and mechanical displacement about which the dynamics is linearized.
///
/// In the effective frame the amplitudes follow in closed form from the
/// configured (shifted) detunings. In the bare frame <q> is found by
/// fixed-point iteration from <q> = 0, undamped first and with damping when
/// that oscillates; multiple displacement branches are an error.
///
/// Calibration targets rescale <m> / <c> in the effective frame and the drive
/// amplitudes in the bare frame (where the shift depends on them).
inline SteadyState solve_steady_state(const SystemParams& p, const SteadyStateOptions& opt = {}) {
  const DriveAmplitudes drives = resolve_drives(p);
  SteadyState ss = detail::solve_uncalibrated(p, drives, opt);
  if (!p.drive.g_mb_target && !p.drive.g_bc_target) return ss;

  if (p.frame == DetuningFrame::effective) {
    const EffectiveCouplings g = effective_couplings(ss, p);
    ss.m_avg *= g.magnon_scale;
    ss.c_avg *= g.cavity_scale;
    ss.magnon_scale = g.magnon_scale;
    ss.cavity_scale = g.cavity_scale;
    const double wb = p.omega_b.rad_per_s();
    ss.q_avg = (p.g_bc.rad_per_s() * std::norm(ss.c_avg) - p.g_mb.rad_per_s() * std::norm(ss.m_avg)) / wb;
    ss.delta_m_bare = p.delta_m - p.g_mb * ss.q_avg;
    ss.delta_c_bare = p.delta_c + p.g_bc * ss.q_avg;
    ss.G_mb = g.G_mb;
    ss.G_bc = g.G_bc;
    return ss;
  }

  DriveAmplitudes scaled = drives;
  double magnon_total = 1.0, cavity_total = 1.0;
  for (int round = 0; round < 100; ++round) {
    const EffectiveCouplings g = effective_couplings(ss, p);
    if (std::abs(g.magnon_scale - 1.0) < 1e-13 && std::abs(g.cavity_scale - 1.0) < 1e-13) {
      ss.magnon_scale = magnon_total;
      ss.cavity_scale = cavity_total;
      return ss;
    }
    // Full multiplicative steps can overshoot into a multistable region even
    // when the target itself is single-valued; shorten the step in log space.
    double step = 1.0;
    for (;;) {
      const double mt = magnon_total * std::pow(g.magnon_scale, step);
      const double ct = cavity_total * std::pow(g.cavity_scale, step);
      scaled.rabi = drives.rabi * mt;
      scaled.cavity = drives.cavity * ct;
      try {
        ss = detail::solve_uncalibrated(p, scaled, opt);
        magnon_total = mt;
        cavity_total = ct;
        break;
      } catch (const NonConvergence&) {
        step *= 0.5;
        if (step < 1e-6) throw;
      }
    }
  }
  throw NonConvergence("coupling calibration did not converge in the bare detuning frame", {});
}

}  // namespace omsq
