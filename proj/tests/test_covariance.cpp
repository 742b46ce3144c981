#include <cmath>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"
#include "omsq/covariance.hpp"
#include "omsq/validation.hpp"

using namespace omsq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Matrix8c covariance_of(const SystemParams& p) {
  const SpectrumEngine e(p, solve_steady_state(p));
  return lyapunov_covariance(e.drift(), e.noise().injection, e.noise().symmetrized);
}

}  // namespace

TEST_CASE("vacuum optical mode has quadrature variance one half") {
  SystemParams p = decoupled(paper_defaults());
  p.temperature_k = 0.0;
  const Matrix8c v = covariance_of(p);
  for (double phi : {0.0, 0.7, 2.0}) CHECK_THAT(covariance_variance(v, quadrature_weights(kC, phi)), WithinAbs(0.5, 1e-12));
}

TEST_CASE("decoupled mechanics thermalizes with its bath") {
  SystemParams p = decoupled(paper_defaults());
  p.temperature_k = 0.3;
  const double nb = thermal_occupation(p.omega_b, p.temperature_k);
  const Matrix8c v = covariance_of(p);
  CHECK_THAT(covariance_variance(v, quadrature_weights(kQ, 0.0)), WithinRel(nb + 0.5, 1e-9));
  CHECK_THAT(covariance_variance(v, quadrature_weights(kP, 0.0)), WithinRel(nb + 0.5, 1e-9));
}

TEST_CASE("Lyapunov solution satisfies its equation") {
  const SystemParams p = paper_defaults();
  const SpectrumEngine e(p, solve_steady_state(p));
  const Matrix8c& a = e.drift().entries;
  const Matrix8c d = e.noise().injection * e.noise().symmetrized.cast<cplx>() * e.noise().injection.transpose();
  const Matrix8c v = lyapunov_covariance(e.drift(), e.noise().injection, e.noise().symmetrized);
  CHECK((a * v + v * a.transpose() + d).cwiseAbs().maxCoeff() <= 1e-10 * v.cwiseAbs().maxCoeff());
  CHECK((v - v.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * v.cwiseAbs().maxCoeff());
}

TEST_CASE("Lyapunov solver rejects a marginal drift matrix") {
  SystemParams p = decoupled(paper_defaults());
  p.gamma_b = AngularFrequency(0.0);
  const SpectrumEngine e(p, solve_steady_state(p));
  CHECK_THROWS_AS(lyapunov_covariance(e.drift(), e.noise().injection, e.noise().symmetrized), NumericalError);
  CHECK_THROWS_AS(parseval_check(e, quadrature_weights(kC, 0.0)), NumericalError);
}

TEST_CASE("spectrum integration resolves a narrow Lorentzian") {
  for (double a : {1.0, 1e-2, 1e-4}) {
    const cplx pole(-a, 0.8);
    auto f = [&](double x) { return 1.0 / ((x - 0.8) * (x - 0.8) + a * a) + 1.0 / ((x + 0.8) * (x + 0.8) + a * a); };
    const SpectrumIntegral r = integrate_spectrum(f, {pole, std::conj(pole)});
    CHECK_THAT(r.value, WithinRel(1.0 / a, 1e-8));
    CHECK(r.tail_fraction > 0.0);
  }
}

TEST_CASE("Parseval cross-check at the default point") {
  const SystemParams p = paper_defaults();
  const ParsevalCheck c = parseval_for(p);
  CHECK(c.relative_error < 1e-3);
  CHECK(c.lyapunov > 0.0);
  // Without an output port the mode's own quadrature is checked the same way.
  const SpectrumEngine e(p, solve_steady_state(p));
  for (int mode : {kA, kM}) {
    const ParsevalCheck m = parseval_check(e, quadrature_weights(mode, 0.4));
    CHECK(m.relative_error < 1e-3);
  }
}

TEST_CASE("Parseval cross-check on random stable draws") {
  std::mt19937_64 rng(77);
  for (int n = 0; n < 20; ++n) CHECK(parseval_for(random_stable_params(rng)).relative_error < 1e-3);
}
