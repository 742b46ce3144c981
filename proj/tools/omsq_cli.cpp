// Command-line front end: steady, stability, spectrum, sweep, validate.
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure,
// 3 validation-suite failure.

#include <cstdint>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "omsq/omsq.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

struct Options {
  std::string config;
  unsigned workers = 1;
  std::optional<std::string> format;
  std::optional<std::string> out;
  double omega_min = 0.01;
  double omega_max = 1.5;
  std::size_t points = 2000;
  std::optional<double> phi_pi;
  std::uint64_t seed = 1;
};

omsq::OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return omsq::OutputFormat::csv;
  if (s == "json") return omsq::OutputFormat::json;
  throw omsq::ConfigError("--format must be csv or json, got '" + s + "'");
}

void write_output(const Options& o, const std::string& text) {
  if (o.out) {
    omsq::write_file(*o.out, text);
  } else {
    std::cout << text;
  }
}

omsq::SystemParams load_params(const Options& o) { return omsq::load_config(o.config).params; }

int cmd_steady(const Options& o) {
  const omsq::SystemParams p = load_params(o);
  const omsq::SteadyState ss = omsq::solve_steady_state(p);
  omsq::json j = omsq::describe_steady_state(ss, p);
  j["metadata"] = omsq::describe(p);
  write_output(o, omsq::dump_json(j));
  return 0;
}

int cmd_stability(const Options& o) {
  const omsq::SystemParams p = load_params(o);
  const omsq::SteadyState ss = omsq::solve_steady_state(p);
  omsq::json j = omsq::describe_stability(omsq::stability_analysis(omsq::build_drift_matrix(p, ss)));
  j["metadata"] = omsq::describe(p);
  write_output(o, omsq::dump_json(j));
  return 0;
}

int cmd_spectrum(const Options& o) {
  omsq::SystemParams p = load_params(o);
  if (o.phi_pi) p.phi = *o.phi_pi * std::numbers::pi;
  if (o.points < 2 || !(o.omega_min < o.omega_max)) {
    throw omsq::ConfigError("spectrum grid needs --points >= 2 and --omega-min < --omega-max");
  }
  const omsq::OutputFormat fmt = o.format ? parse_format(*o.format) : omsq::OutputFormat::csv;

  const omsq::SteadyState ss = omsq::solve_steady_state(p);
  const omsq::SpectrumEngine engine(p, ss);
  const omsq::StabilityReport st = omsq::stability_analysis(engine.drift());
  if (!st.stable) {
    throw omsq::NumericalError("system is unstable (largest eigenvalue real part " + std::to_string(st.margin) +
                               " omega_b); no stationary spectrum exists");
  }
  const std::vector<double> grid = omsq::linspace(o.omega_min, o.omega_max, o.points);
  const omsq::SpectrumResult r = omsq::spectrum_curve(engine, grid, p.phi);

  omsq::json meta = omsq::describe(p);
  meta["grid"] = {{"omega_min", o.omega_min}, {"omega_max", o.omega_max}, {"points", o.points}, {"units", "omega_b"}};
  meta["summary"] = {{"s_min", r.s_min},
                     {"omega_at_min", r.omega_at_min},
                     {"band", r.band ? omsq::json{r.band->lo, r.band->hi} : omsq::json(nullptr)},
                     {"bandwidth", r.bandwidth},
                     {"bandwidth_hz", r.bandwidth_rad().hz()}};

  std::string text;
  if (fmt == omsq::OutputFormat::csv) {
    std::ostringstream os;
    os << "omega_over_omega_b,S,S_dB\n";
    for (std::size_t i = 0; i < r.omegas.size(); ++i) {
      os << omsq::format_double(r.omegas[i]) << ',' << omsq::format_double(r.values[i]) << ',';
      if (r.values[i] > 0.0) os << omsq::format_double(omsq::to_decibels(r.values[i]));
      os << '\n';
    }
    text = os.str();
  } else {
    omsq::json j;
    j["metadata"] = meta;
    j["omega_over_omega_b"] = r.omegas;
    j["S"] = r.values;
    text = omsq::dump_json(j);
  }
  write_output(o, text);
  if (o.out && fmt == omsq::OutputFormat::csv) omsq::write_file(omsq::sidecar_path(*o.out), omsq::dump_json(meta));
  return 0;
}

int cmd_sweep(const Options& o) {
  const omsq::Config cfg = omsq::load_config(o.config);
  if (!cfg.sweep) throw omsq::ConfigError("config has no [sweep] section");
  omsq::SweepSpec spec = *cfg.sweep;
  if (o.format) spec.format = parse_format(*o.format);
  if (o.out) spec.output_path = *o.out;
  const omsq::SweepResult r = omsq::run_sweep(spec, cfg.params, o.workers);
  if (spec.output_path.empty()) {
    std::cout << omsq::render(r, spec.format);
  } else {
    omsq::emit(r, spec.format, spec.output_path);
  }
  return 0;
}

int cmd_validate(const Options& o) {
  const omsq::SystemParams p = load_params(o);
  const omsq::ValidationReport rep = omsq::run_validation(p, o.seed);
  omsq::json j = omsq::to_json(rep);
  j["seed"] = o.seed;
  j["metadata"] = omsq::describe(p);
  write_output(o, omsq::dump_json(j));
  return rep.all_passed() ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Squeezing spectrum simulator for a cavity opto-magnomechanical system"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--workers", o.workers, "worker threads for sweeps (0 = all cores)");
  app.add_option("--format", o.format, "output format: csv or json");
  app.add_option("--out", o.out, "output path (default: stdout)");

  auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "configuration file")->required();
    return sub;
  };
  CLI::App* steady = with_config(app.add_subcommand("steady", "steady-state amplitudes as JSON"));
  CLI::App* stability = with_config(app.add_subcommand("stability", "drift-matrix eigenvalues as JSON"));
  CLI::App* spectrum = with_config(app.add_subcommand("spectrum", "output noise spectrum on an omega grid"));
  spectrum->add_option("--omega-min", o.omega_min, "grid start, units of omega_b");
  spectrum->add_option("--omega-max", o.omega_max, "grid end, units of omega_b");
  spectrum->add_option("--points", o.points, "grid points");
  spectrum->add_option("--phi-pi", o.phi_pi, "homodyne phase in units of pi");
  CLI::App* sweep = with_config(app.add_subcommand("sweep", "run the [sweep] section of the config"));
  CLI::App* validate = with_config(app.add_subcommand("validate", "run the invariant and oracle checks"));
  validate->add_option("--seed", o.seed, "seed for the random draws");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*steady) return cmd_steady(o);
    if (*stability) return cmd_stability(o);
    if (*spectrum) return cmd_spectrum(o);
    if (*sweep) return cmd_sweep(o);
    if (*validate) return cmd_validate(o);
  } catch (const omsq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const omsq::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const omsq::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const omsq::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
