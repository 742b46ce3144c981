// Acceptance suite. Runs the listed criteria (all when no argument is given)
// and prints one PASS/FAIL line per criterion. Exit status is non-zero when
// any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "omsq/omsq.hpp"

namespace {

using namespace omsq;

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kShotNoiseTol = 1e-12;
constexpr double kMinTarget = 0.16, kMinTol = 0.05;
constexpr double kOmegaTarget = 0.65, kOmegaTol = 0.1;
constexpr double kDeltaTarget = 1.0, kDeltaTol = 0.15;
constexpr double kBandLo = 0.5, kBandHi = 0.9, kBandEdgeTol = 0.07;
constexpr double kBandwidthHz = 16e6, kBandwidthRelTol = 0.25;
constexpr double kPhiTarget = 0.3, kPhiTol = 0.05;  // units of pi
constexpr double kPhaseMinTarget = 0.17, kPhaseMinTol = 0.05;
constexpr double kPhaseMonotoneSpan = 0.2;  // units of pi
constexpr double kColdTarget = 0.16, kHotTarget = 0.19, kThermalTol = 0.04;
constexpr double kParsevalTol = 1e-3;
constexpr double kDbTol = 0.01;
// |G_mb| used when the physical drive route misses the map minimum.
constexpr double kFallbackGmbHz = 8e6;
constexpr double kFallbackGmbMinHz = 0.1e6, kFallbackGmbMaxHz = 10e6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within(double x, double target, double tol) { return std::abs(x - target) <= tol; }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Minimum over stable cells of an (omega, delta_c) map.
struct MapMinimum {
  double s = std::numeric_limits<double>::infinity();
  double omega = 0.0, delta_c = 0.0;
  double seconds = 0.0;
};

MapMinimum squeezing_map_minimum(const SystemParams& base, std::size_t n) {
  SweepSpec spec;
  spec.axis1 = {SweepParam::omega, 0.0, 1.5, n};
  spec.axis2 = SweepAxis{SweepParam::delta_c, 0.0, 2.0, n};
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult r = run_sweep(spec, base, 0);
  MapMinimum m;
  m.seconds = seconds_since(t0);
  for (const SweepRow& row : r.rows) {
    if (row.s && *row.s < m.s) {
      m.s = *row.s;
      m.omega = row.axis1;
      m.delta_c = *row.axis2;
    }
  }
  return m;
}

bool map_minimum_ok(const MapMinimum& m) {
  return within(m.s, kMinTarget, kMinTol) && within(m.omega, kOmegaTarget, kOmegaTol) &&
         within(m.delta_c, kDeltaTarget, kDeltaTol);
}

std::string describe_minimum(const MapMinimum& m) {
  return "min S = " + fmt("%.4f", m.s) + " at omega = " + fmt("%.3f", m.omega) + ", delta_c = " +
         fmt("%.3f", m.delta_c) + " (" + fmt("%.1f s", m.seconds) + ")";
}

SystemParams fallback_calibrated() {
  SystemParams p = paper_defaults();
  p.drive.g_mb_target = AngularFrequency::from_hz(kFallbackGmbHz);
  return p;
}

// Minimum over omega in [0.01, 1.5] omega_b.
double min_over_omega(const SystemParams& p, std::size_t points = 600) {
  const SteadyState ss = solve_steady_state(p);
  const SpectrumEngine engine(p, ss);
  if (!stability_analysis(engine.drift()).stable) return std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> grid = linspace(0.01, 1.5, points);
  return spectrum_curve(engine, grid, p.phi).s_min;
}

Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    SystemParams p = decoupled(paper_defaults());
    p.temperature_k = 2.0 * u(rng);
    const SpectrumEngine engine(p, solve_steady_state(p));
    worst = std::max(worst, std::abs(engine(-5.0 + 10.0 * u(rng), 2.0 * kPi * u(rng)) - kShotNoise));
  }
  const double dt = seconds_since(t0);
  return {worst <= kShotNoiseTol && dt < 1.0,
          "max |S - 1/2| = " + fmt("%.2e", worst) + " over 100 draws (" + fmt("%.3f s", dt) + ")"};
}

Outcome criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const SystemParams p = paper_defaults();
  const StabilityReport st = stability_analysis(build_drift_matrix(p, solve_steady_state(p)));
  const double dt = seconds_since(t0);
  return {st.margin < 0.0 && dt < 1.0, "margin = " + fmt("%.5f", st.margin) + " omega_b (" + fmt("%.3f s", dt) + ")"};
}

Outcome criterion_3() {
  const MapMinimum phys = squeezing_map_minimum(paper_defaults(), 300);
  if (map_minimum_ok(phys) && phys.seconds < 60.0) {
    return {true, "physical drive route: " + describe_minimum(phys)};
  }
  const MapMinimum cal = squeezing_map_minimum(fallback_calibrated(), 300);
  const bool gmb_ok = kFallbackGmbHz >= kFallbackGmbMinHz && kFallbackGmbHz <= kFallbackGmbMaxHz;
  return {map_minimum_ok(cal) && gmb_ok && cal.seconds < 60.0,
          "physical route misses (" + describe_minimum(phys) + "); calibrated |G_mb| = 2pi x " +
              fmt("%.1f MHz", kFallbackGmbHz / 1e6) + ": " + describe_minimum(cal)};
}

Outcome criterion_4() {
  // Same operating point as criterion 3 settles on.
  SystemParams p = paper_defaults();
  MapMinimum m = squeezing_map_minimum(p, 300);
  if (!map_minimum_ok(m)) {
    p = fallback_calibrated();
    m = squeezing_map_minimum(p, 300);
  }
  p.delta_c = p.omega_b * m.delta_c;
  const SpectrumEngine engine(p, solve_steady_state(p));
  const std::vector<double> grid = linspace(0.0, 1.5, 2000);
  const SpectrumResult r = spectrum_curve(engine, grid, p.phi);
  if (!r.band) return {false, "no sub-shot-noise band at delta_c = " + fmt("%.3f", m.delta_c)};
  const double bw_hz = r.bandwidth_rad().hz();
  const bool ok = within(r.band->lo, kBandLo, kBandEdgeTol) && within(r.band->hi, kBandHi, kBandEdgeTol) &&
                  within(bw_hz, kBandwidthHz, kBandwidthRelTol * kBandwidthHz);
  return {ok, "delta_c = " + fmt("%.3f", m.delta_c) + ": band (" + fmt("%.4f", r.band->lo) + ", " +
                  fmt("%.4f", r.band->hi) + ") omega_b, bandwidth 2pi x " + fmt("%.2f MHz", bw_hz / 1e6)};
}

Outcome criterion_5() {
  const std::vector<double> phis = linspace(0.0, 1.0, 200);  // units of pi
  std::vector<double> mins;
  for (double f : phis) {
    SystemParams p = paper_defaults();
    p.phi = f * kPi;
    mins.push_back(min_over_omega(p));
  }
  const std::size_t k = static_cast<std::size_t>(std::min_element(mins.begin(), mins.end()) - mins.begin());
  bool monotone = true;
  for (std::size_t i = k + 1; i < phis.size() && phis[i] <= phis[k] + kPhaseMonotoneSpan + 1e-12; ++i) {
    if (mins[i] < mins[i - 1]) monotone = false;
  }
  const bool ok = within(phis[k], kPhiTarget, kPhiTol) && within(mins[k], kPhaseMinTarget, kPhaseMinTol) && monotone;
  return {ok, "optimum phi = " + fmt("%.4f", phis[k]) + " pi, min S = " + fmt("%.4f", mins[k]) + " (" +
                  fmt("%.2f dB", to_decibels(mins[k])) + "), non-decreasing over the next 0.2 pi: " +
                  (monotone ? "yes" : "no")};
}

Outcome criterion_6() {
  auto at = [](double kappa_c) {
    SystemParams p = paper_defaults();
    p.kappa_1 = p.omega_b * (0.9 * kappa_c);
    p.kappa_2 = p.omega_b * (0.1 * kappa_c);
    return min_over_omega(p);
  };
  const double lo = at(0.2), hi = at(1.0);
  return {hi < lo, "min S at kappa_c = 0.2 omega_b: " + fmt("%.4f", lo) + ", at kappa_c = omega_b: " + fmt("%.4f", hi)};
}

Outcome criterion_7() {
  SystemParams p = paper_defaults();
  const SteadyState ss = solve_steady_state(p);
  const std::vector<double> grid = linspace(0.01, 1.5, 2000);
  const double omega_opt = spectrum_curve(SpectrumEngine(p, ss), grid, p.phi).omega_at_min;
  std::vector<double> s;
  std::string detail = "omega = " + fmt("%.4f", omega_opt) + ":";
  for (double t : {0.02, 0.5, 0.7, 1.0}) {
    p.temperature_k = t;
    s.push_back(SpectrumEngine(p, solve_steady_state(p))(omega_opt, p.phi));
    detail += " S(" + fmt("%g K", t) + ") = " + fmt("%.4f", s.back());
  }
  const bool monotone = std::is_sorted(s.begin(), s.end());
  return {within(s.front(), kColdTarget, kThermalTol) && within(s.back(), kHotTarget, kThermalTol) && monotone,
          detail};
}

Outcome criterion_8() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) worst = std::max(worst, parseval_for(random_stable_params(rng)).relative_error);
  const double dt = seconds_since(t0);
  return {worst <= kParsevalTol && dt < 30.0,
          "max relative deviation " + fmt("%.2e", worst) + " over 20 stable draws (" + fmt("%.2f s", dt) + ")"};
}

Outcome criterion_9() {
  const double a = to_decibels(0.16), b = to_decibels(0.17);
  return {within(a, -4.95, kDbTol) && within(b, -4.68, kDbTol),
          "0.16 -> " + fmt("%.4f dB", a) + ", 0.17 -> " + fmt("%.4f dB", b)};
}

Outcome criterion_10() {
  SweepSpec spec;
  spec.axis1 = {SweepParam::omega, 0.0, 1.5, 500};
  spec.axis2 = SweepAxis{SweepParam::delta_c, 0.0, 2.0, 500};
  const SystemParams base = paper_defaults();
  double slowest = 0.0;
  auto run = [&](unsigned workers) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string csv = render(run_sweep(spec, base, workers), OutputFormat::csv);
    slowest = std::max(slowest, seconds_since(t0));
    return csv;
  };
  const std::string a = run(1), b = run(1), c = run(4);
  const bool same = a == b && a == c;
  return {same && slowest < 120.0, std::string("runs byte-identical (1, 1, 4 workers): ") + (same ? "yes" : "no") +
                                       ", slowest " + fmt("%.1f s", slowest) + ", " + fmt("%.0f bytes", double(a.size()))};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"shot-noise anchor", criterion_1},
    {"stability at the default operating point", criterion_2},
    {"(omega, delta_c) map minimum", criterion_3},
    {"squeezing bandwidth", criterion_4},
    {"homodyne phase optimum", criterion_5},
    {"optical decay trend", criterion_6},
    {"temperature robustness", criterion_7},
    {"Parseval / Lyapunov equivalence", criterion_8},
    {"decibel conversion", criterion_9},
    {"sweep determinism and performance", criterion_10},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto& [name, run] = kCriteria[static_cast<std::size_t>(id - 1)];
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
