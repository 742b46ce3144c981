#pragma once

// 1D/2D parameter sweeps. Cells sharing every non-omega coordinate share one
// steady state and drift matrix, so a task is one such group; tasks run on a
// small worker pool and results are gathered by grid index.

#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "omsq/config.hpp"
#include "omsq/dynamics.hpp"
#include "omsq/errors.hpp"
#include "omsq/model.hpp"
#include "omsq/report.hpp"
#include "omsq/spectrum.hpp"
#include "omsq/steady_state.hpp"

namespace omsq {

/// Applies one non-omega sweep coordinate to `p` (axis units, see SweepAxis).
/// kappa_c keeps kappa_2 fixed and assigns the remainder to kappa_1.
inline void apply_sweep_param(SystemParams& p, SweepParam param, double value) {
  const AngularFrequency wb = p.omega_b;
  switch (param) {
    case SweepParam::delta_c:
      p.delta_c = wb * value;
      break;
    case SweepParam::delta_m_eq_a:
      p.delta_m = wb * value;
      p.delta_a = wb * value;
      break;
    case SweepParam::phi:
      p.phi = value * std::numbers::pi;
      break;
    case SweepParam::kappa_c: {
      const AngularFrequency k1 = wb * value - p.kappa_2;
      if (k1.rad_per_s() < 0.0) {
        throw ConfigError("kappa_c = " + std::to_string(value) + " omega_b is below the fixed kappa_2");
      }
      p.kappa_1 = k1;
      break;
    }
    case SweepParam::temperature:
      p.temperature_k = value;
      break;
    case SweepParam::omega:
      throw ConfigError("omega is a spectrum coordinate, not a system parameter");
  }
}

struct SweepRow {
  double axis1 = 0.0;
  std::optional<double> axis2;
  std::optional<double> s;  // absent when unstable or failed
  bool stable = false;
  std::string error;        // empty unless the cell failed numerically
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // axis1 outer, axis2 inner
  json metadata;
};

/// Base parameters with the sweep's fixed overrides applied (omega excluded).
inline SystemParams resolve_sweep_base(const SweepSpec& spec, SystemParams base) {
  for (const auto& [param, value] : spec.fixed_overrides) {
    if (param != SweepParam::omega) apply_sweep_param(base, param, value);
  }
  base.validate();
  return base;
}

inline json describe_grid(const SweepSpec& spec) {
  auto axis = [](const SweepAxis& a) {
    return json{{"param", to_string(a.param)}, {"min", a.min}, {"max", a.max}, {"points", a.points}};
  };
  json j;
  j["axis1"] = axis(spec.axis1);
  j["axis2"] = spec.axis2 ? axis(*spec.axis2) : json(nullptr);
  json fixed = json::object();
  for (const auto& [param, value] : spec.fixed_overrides) fixed[to_string(param)] = value;
  j["fixed"] = fixed;
  j["units"] = "omega, delta_c, delta_m_eq_a, kappa_c in omega_b; phi in pi; temperature in K";
  return j;
}

namespace detail {

/// Evaluates one group of cells that share all non-omega coordinates.
inline void evaluate_group(const SystemParams& p, const std::vector<double>& omegas,
                           const std::vector<SweepRow*>& cells) {
  auto fail_all = [&](const std::string& msg, bool stable) {
    for (SweepRow* c : cells) {
      c->stable = stable;
      c->error = msg;
    }
  };
  try {
    p.validate();
    const SteadyState ss = solve_steady_state(p);
    const SpectrumEngine engine(p, ss);
    const StabilityReport st = stability_analysis(engine.drift());
    if (!st.stable) {
      fail_all("", false);
      return;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      cells[i]->stable = true;
      try {
        cells[i]->s = engine(omegas[i], p.phi);
      } catch (const std::exception& e) {
        cells[i]->error = e.what();
      }
    }
  } catch (const std::exception& e) {
    fail_all(e.what(), false);
  }
}

}  // namespace detail

/// Runs the sweep with `workers` threads (0 = hardware concurrency). The
/// output does not depend on the worker count.
inline SweepResult run_sweep(const SweepSpec& spec, const SystemParams& base, unsigned workers = 1) {
  spec.validate();
  const SystemParams resolved = resolve_sweep_base(spec, base);

  SweepResult result;
  result.spec = spec;
  result.metadata = describe(resolved);
  result.metadata["grid"] = describe_grid(spec);

  const std::vector<double> v1 = spec.axis1.values();
  const std::vector<double> v2 = spec.axis2 ? spec.axis2->values() : std::vector<double>{};
  const std::size_t n2 = spec.axis2 ? v2.size() : 1;
  result.rows.resize(v1.size() * n2);
  for (std::size_t i = 0; i < v1.size(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      SweepRow& r = result.rows[i * n2 + j];
      r.axis1 = v1[i];
      if (spec.axis2) r.axis2 = v2[j];
    }
  }

  // Group cells by their non-omega coordinates.
  struct Group {
    SystemParams params;
    std::vector<double> omegas;
    std::vector<SweepRow*> cells;
  };
  std::vector<Group> groups;
  const bool omega_on_1 = spec.axis1.param == SweepParam::omega;
  const bool omega_on_2 = spec.axis2 && spec.axis2->param == SweepParam::omega;
  const double fixed_omega = omega_on_1 || omega_on_2 ? 0.0 : spec.fixed_overrides.at(SweepParam::omega);

  auto make_params = [&](std::optional<double> a1, std::optional<double> a2) {
    SystemParams p = resolved;
    if (a1) apply_sweep_param(p, spec.axis1.param, *a1);
    if (a2) apply_sweep_param(p, spec.axis2->param, *a2);
    return p;
  };

  try {
    if (omega_on_1) {
      for (std::size_t j = 0; j < n2; ++j) {
        Group g{make_params(std::nullopt, spec.axis2 ? std::optional(v2[j]) : std::nullopt), {}, {}};
        for (std::size_t i = 0; i < v1.size(); ++i) {
          g.omegas.push_back(v1[i]);
          g.cells.push_back(&result.rows[i * n2 + j]);
        }
        groups.push_back(std::move(g));
      }
    } else if (omega_on_2) {
      for (std::size_t i = 0; i < v1.size(); ++i) {
        Group g{make_params(v1[i], std::nullopt), {}, {}};
        for (std::size_t j = 0; j < n2; ++j) {
          g.omegas.push_back(v2[j]);
          g.cells.push_back(&result.rows[i * n2 + j]);
        }
        groups.push_back(std::move(g));
      }
    } else {
      for (std::size_t i = 0; i < v1.size(); ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
          groups.push_back(
              {make_params(v1[i], spec.axis2 ? std::optional(v2[j]) : std::nullopt), {fixed_omega},
               {&result.rows[i * n2 + j]}});
        }
      }
    }
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("sweep grid: ") + e.what());
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, groups.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next.fetch_add(1); k < groups.size(); k = next.fetch_add(1)) {
      detail::evaluate_group(groups[k].params, groups[k].omegas, groups[k].cells);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  json errors = json::array();
  for (std::size_t k = 0; k < result.rows.size(); ++k) {
    if (!result.rows[k].error.empty()) errors.push_back({{"index", k}, {"message", result.rows[k].error}});
  }
  result.metadata["cell_errors"] = errors;
  return result;
}

}  // namespace omsq
