#include <random>

#include "catch_amalgamated.hpp"
#include "omsq/validation.hpp"

using namespace omsq;

TEST_CASE("validation suite passes at the default operating point") {
  const ValidationReport rep = run_validation(paper_defaults(), 7);
  for (const ValidationCheck& c : rep.checks) {
    INFO(c.name << ": residual " << c.residual << " tolerance " << c.tolerance << " " << c.detail);
    CHECK(c.passed);
  }
  CHECK(rep.all_passed());
  CHECK(rep.checks.size() >= 15);
  const json j = to_json(rep);
  CHECK(j.at("passed") == true);
}

TEST_CASE("validation reports instability as a failed check") {
  SystemParams p = paper_defaults();
  p.delta_c = -p.omega_b;
  const ValidationReport rep = run_validation(p, 7, 2);
  CHECK_FALSE(rep.all_passed());
  bool saw_stability = false;
  for (const ValidationCheck& c : rep.checks) {
    if (c.name == "stability") {
      saw_stability = true;
      CHECK_FALSE(c.passed);
    }
  }
  CHECK(saw_stability);
}

TEST_CASE("random draws are stable and reproducible") {
  std::mt19937_64 a(5), b(5);
  for (int i = 0; i < 10; ++i) {
    const SystemParams p = random_stable_params(a);
    const SystemParams q = random_stable_params(b);
    CHECK(p.delta_c == q.delta_c);
    CHECK(p.phi == q.phi);
    CHECK_NOTHROW(p.validate());
    CHECK(stability_analysis(build_drift_matrix(p, solve_steady_state(p))).stable);
  }
}
