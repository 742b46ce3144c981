#pragma once

// Stationary second moments of the fluctuations, computed two independent
// ways: from the Lyapunov equation of the drift matrix, and by integrating
// the intracavity spectrum over all frequencies.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "omsq/dynamics.hpp"
#include "omsq/errors.hpp"
#include "omsq/spectrum.hpp"

namespace omsq {

/// Solves A V + V A^T + M C_sym M^T = 0 for V_ij = <{u_i, u_j}>/2.
///
/// In the doubled basis the plain transpose pairs each operator with its own
/// correlator (u holds both o and o+), so no conjugation appears.
inline Matrix8c lyapunov_covariance(const DriftMatrix& a, const Matrix89c& injection, const Matrix9d& c_sym) {
  constexpr int n = 8;
  const StabilityReport st = stability_analysis(a);
  if (!st.stable) {
    throw NumericalError("no stationary covariance: drift matrix has an eigenvalue with real part " +
                         std::to_string(st.margin));
  }
  const Matrix8c d = injection * c_sym.cast<cplx>() * injection.transpose();
  using Big = Eigen::Matrix<cplx, n * n, n * n>;
  const Matrix8c id = Matrix8c::Identity();
  Big k = Big::Zero();
  // Column-major vec: vec(A V) = (I kron A) vec V, vec(V A^T) = (A kron I) vec V.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      k.block<n, n>(i * n, j * n) += id(i, j) * a.entries + a.entries(i, j) * id;
    }
  }
  const Eigen::PartialPivLU<Big> lu(k);
  if (!(lu.rcond() > 1e-14)) {
    throw NumericalError("Lyapunov operator is singular; the drift matrix is not strictly stable");
  }
  Eigen::Matrix<cplx, n * n, 1> rhs;
  for (int j = 0; j < n; ++j) rhs.segment<n>(j * n) = -d.col(j);
  const Eigen::Matrix<cplx, n * n, 1> x = lu.solve(rhs);
  Matrix8c v;
  for (int j = 0; j < n; ++j) v.col(j) = x.segment<n>(j * n);
  return v;
}

/// Row vector selecting the phase-phi quadrature (o e^{-i phi} + o+ e^{i phi})/sqrt(2)
/// of a bosonic mode (`mode` is its annihilation index), or q / p directly.
inline RowVector8c quadrature_weights(int mode, double phi) {
  RowVector8c w = RowVector8c::Zero();
  if (mode == kQ || mode == kP) {
    w(mode) = 1.0;
    return w;
  }
  const cplx rot = std::polar(1.0, -phi) / std::sqrt(2.0);
  w(mode) = rot;
  w(mode + 1) = std::conj(rot);
  return w;
}

inline double covariance_variance(const Matrix8c& v, const RowVector8c& w) {
  return (w * v * w.transpose())(0, 0).real();
}

/// Symmetrized spectrum of the intracavity observable w . u.
inline double intracavity_spectral_density(const SpectrumEngine& engine, const RowVector8c& w, double omega) {
  const RowVector9c xp = w * engine.transfer(omega).entries;
  const RowVector9c xm = w * engine.transfer(-omega).entries;
  return (xp * engine.noise().symmetrized * xm.transpose())(0, 0).real();
}

struct SpectrumIntegral {
  double value = 0.0;        // (1/2pi) * integral over the real line
  double error_estimate = 0.0;
  double tail_fraction = 0.0;  // contribution of |w| > cutoff
};

/// (1/2pi) * integral of `f` over the real line. The window |w| <= cutoff is
/// split at the resonances given by `poles` (eigenvalues of A) so the adaptive
/// Gauss-Kronrod rule resolves arbitrarily narrow peaks; the two tails are
/// integrated by the same rule on a mapped semi-infinite interval.
template <class F>
SpectrumIntegral integrate_spectrum(F&& f, const std::vector<cplx>& poles, double cutoff = 50.0,
                                    double tolerance = 1e-9) {
  std::vector<double> cuts{-cutoff, cutoff};
  for (const cplx& z : poles) {
    const double centre = z.imag();
    const double width = std::max(std::abs(z.real()), 1e-14);
    for (double sign : {-1.0, 1.0}) {
      for (double k : {0.0, 1.0, 4.0, 16.0, 64.0}) {
        for (double side : {-1.0, 1.0}) {
          const double x = sign * centre + side * k * width;
          if (std::abs(x) < cutoff) cuts.push_back(x);
        }
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  // Conjugate eigenvalue pairs produce cuts that coincide up to rounding;
  // a sliver interval would never meet the relative tolerance.
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return std::abs(x - y) <= 1e-10 * std::max(1.0, std::abs(x)); }),
             cuts.end());

  using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr unsigned kDepth = 15;
  SpectrumIntegral out;
  double window = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    window += gk::integrate(f, cuts[i], cuts[i + 1], kDepth, tolerance, &err);
    out.error_estimate += err;
  }
  double err_hi = 0.0, err_lo = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  const double tail = gk::integrate(f, cutoff, inf, kDepth, tolerance, &err_hi) +
                      gk::integrate(f, -inf, -cutoff, kDepth, tolerance, &err_lo);
  out.error_estimate += err_hi + err_lo;
  const double total = window + tail;
  out.value = total / (2.0 * std::numbers::pi);
  out.error_estimate /= 2.0 * std::numbers::pi;
  out.tail_fraction = total != 0.0 ? tail / total : 0.0;
  return out;
}

/// Parseval check: variance of the intracavity quadrature w.u from the
/// Lyapunov solution against (1/2pi) * integral of its spectrum.
struct ParsevalCheck {
  double lyapunov = 0.0;
  double spectral = 0.0;
  double relative_error = 0.0;
};

inline ParsevalCheck parseval_check(const SpectrumEngine& engine, const RowVector8c& w) {
  const StabilityReport st = stability_analysis(engine.drift());
  if (!st.stable) throw NumericalError("Parseval check requires a stable drift matrix");
  const Matrix8c v = lyapunov_covariance(engine.drift(), engine.noise().injection, engine.noise().symmetrized);
  ParsevalCheck out;
  out.lyapunov = covariance_variance(v, w);
  out.spectral = integrate_spectrum([&](double x) { return intracavity_spectral_density(engine, w, x); },
                                    st.eigenvalues)
                     .value;
  out.relative_error = std::abs(out.spectral - out.lyapunov) / std::abs(out.lyapunov);
  return out;
}

}  // namespace omsq
