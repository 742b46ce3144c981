#include <cmath>
#include <numbers>
#include <random>

#include "catch_amalgamated.hpp"
#include "omsq/model.hpp"

using namespace omsq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kHbar = 1.054571817e-34;
constexpr double kKb = 1.380649e-23;
constexpr double kC = 299792458.0;
}  // namespace

TEST_CASE("thermal occupation") {
  const AngularFrequency wb = AngularFrequency::from_hz(40e6);
  SECTION("zero temperature gives exactly zero") {
    CHECK(thermal_occupation(wb, 0.0) == 0.0);
    CHECK(thermal_occupation(AngularFrequency::from_hz(1e15), 0.0) == 0.0);
  }
  SECTION("hbar w / kT = ln 2 gives one quantum") {
    const double t = kHbar * wb.rad_per_s() / (kKb * std::log(2.0));
    CHECK_THAT(thermal_occupation(wb, t), WithinRel(1.0, 1e-12));
  }
  SECTION("phonon bath at 20 mK") {
    const double oracle = 1.0 / (std::exp(kHbar * wb.rad_per_s() / (kKb * 0.02)) - 1.0);
    CHECK_THAT(thermal_occupation(wb, 0.02), WithinRel(oracle, 1e-12));
    CHECK_THAT(thermal_occupation(wb, 0.02), WithinRel(9.926307078548584, 1e-12));
  }
  SECTION("non-positive frequency and negative temperature are rejected") {
    CHECK_THROWS_AS(thermal_occupation(AngularFrequency(0.0), 1.0), DomainError);
    CHECK_THROWS_AS(thermal_occupation(AngularFrequency(-1.0), 1.0), DomainError);
    CHECK_THROWS_AS(thermal_occupation(wb, -1.0), DomainError);
  }
}

TEST_CASE("thermal occupation obeys detailed balance and grows with temperature") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lw(6.0, 15.0), lt(-3.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const AngularFrequency w(std::pow(10.0, lw(rng)));
    const double t = std::pow(10.0, lt(rng));
    const double x = kHbar * w.rad_per_s() / (kKb * t);
    if (x > 600.0) continue;
    const double n = thermal_occupation(w, t);
    CHECK(n >= 0.0);
    CHECK_THAT(n + 1.0, WithinRel(std::exp(x) * n, 1e-12));
    CHECK(thermal_occupation(w, 1.5 * t) >= n);
  }
}

TEST_CASE("drive field amplitude") {
  const double h = drive_field_amplitude(5e-3, 5e-6, 3e-6);
  const double oracle = std::sqrt(2.0 * 4e-7 * std::numbers::pi * 5e-3 / (5e-6 * 3e-6 * kC));
  CHECK_THAT(h, WithinRel(oracle, 1e-14));
  CHECK_THAT(h, WithinRel(1.6716638505599468e-3, 1e-12));
  CHECK_THAT(drive_field_amplitude(4 * 5e-3, 5e-6, 3e-6), WithinRel(2.0 * h, 1e-14));
  CHECK(drive_field_amplitude(0.0, 5e-6, 3e-6) == 0.0);
  CHECK_THROWS_AS(drive_field_amplitude(-1.0, 5e-6, 3e-6), DomainError);
  CHECK_THROWS_AS(drive_field_amplitude(1.0, 0.0, 3e-6), DomainError);
  CHECK_THROWS_AS(drive_field_amplitude(1.0, 5e-6, -3e-6), DomainError);
}

TEST_CASE("Rabi frequency") {
  const double gamma = 2.0 * std::numbers::pi * 28e9;
  CHECK(rabi_frequency(0.0, 1e14, gamma).rad_per_s() == 0.0);
  const AngularFrequency r = rabi_frequency(1e-3, 1e14, gamma);
  CHECK_THAT(rabi_frequency(1e-3, 4e14, gamma).rad_per_s(), WithinRel(2.0 * r.rad_per_s(), 1e-14));
  CHECK_THAT(r.rad_per_s(), WithinRel(std::sqrt(5.0) / 4.0 * gamma * 1e7 * 1e-3, 1e-14));
  CHECK_THROWS_AS(rabi_frequency(-1.0, 1.0, gamma), DomainError);
  // Chained physical route with the default constants.
  const DriveAmplitudes d = resolve_drives(paper_defaults());
  CHECK_THAT(d.rabi.rad_per_s(), WithinRel(58496342749434.26, 1e-12));
}

TEST_CASE("cavity drive amplitude") {
  const AngularFrequency kc = AngularFrequency::from_hz(40e6);
  const AngularFrequency e = cavity_drive_amplitude(0.64e-3, 1550e-9, kc);
  const double omega_l = 2.0 * std::numbers::pi * kC / 1550e-9;
  CHECK_THAT(e.rad_per_s(), WithinRel(std::sqrt(2.0 * kc.rad_per_s() * 0.64e-3 / (kHbar * omega_l)), 1e-14));
  CHECK_THAT(e.rad_per_s(), WithinRel(1.58e12, 0.01));
  CHECK(cavity_drive_amplitude(0.0, 1550e-9, kc).rad_per_s() == 0.0);
  CHECK_THAT(cavity_drive_amplitude(0.64e-3, 1550e-9, 4.0 * kc).rad_per_s(), WithinRel(2.0 * e.rad_per_s(), 1e-14));
  CHECK_THROWS_AS(cavity_drive_amplitude(-1.0, 1550e-9, kc), DomainError);
  CHECK_THROWS_AS(cavity_drive_amplitude(1.0, 0.0, kc), DomainError);
}

TEST_CASE("default operating point") {
  const SystemParams p = paper_defaults();
  CHECK_THAT(p.g_ma.hz(), WithinRel(15e6, 1e-15));
  CHECK_THAT(p.kappa_c().rad_per_s(), WithinRel(p.omega_b.rad_per_s(), 1e-15));
  CHECK(p.temperature_k == 0.02);
  CHECK_THAT(p.phi, WithinRel(0.3 * std::numbers::pi, 1e-15));
  CHECK_THAT(p.mechanical_q(), WithinRel(4e5, 1e-12));
  CHECK_NOTHROW(p.validate());
  CHECK(p.drive.magnon_route() == "physical");
  CHECK(p.drive.cavity_route() == "physical");
  CHECK(p.frame == DetuningFrame::effective);
}

TEST_CASE("validation rejects unphysical parameters") {
  auto expect_reject = [](auto mutate) {
    SystemParams p = paper_defaults();
    mutate(p);
    CHECK_THROWS_AS(p.validate(), ConfigError);
  };
  expect_reject([](SystemParams& p) { p.gamma_b = p.omega_b / 50.0; });
  expect_reject([](SystemParams& p) { p.temperature_k = -0.1; });
  expect_reject([](SystemParams& p) { p.kappa_a = AngularFrequency(-1.0); });
  expect_reject([](SystemParams& p) { p.omega_b = AngularFrequency(0.0); });
  expect_reject([](SystemParams& p) { p.drive.magnon = MagnonDrivePhysical{5e-3, 0.0, 3e-6, 1e-17}; });
  expect_reject([](SystemParams& p) { p.drive.cavity = CavityDrivePhysical{-1.0, 1550e-9}; });
  expect_reject([](SystemParams& p) { p.drive.g_mb_target = AngularFrequency(-1.0); });
}

TEST_CASE("thermal occupations of the four baths") {
  const ThermalOccupations n = thermal_occupations(paper_defaults());
  CHECK_THAT(n.n_b, WithinRel(9.926307078548584, 1e-12));
  CHECK_THAT(n.n_a, WithinRel(3.78945e-11, 1e-4));
  CHECK(n.n_a == n.n_m);
  CHECK(n.n_c == 0.0);  // exp underflow at optical frequencies
}
