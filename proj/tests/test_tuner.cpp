#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "cfa/rng.hpp"
#include "cfa/tuner.hpp"

using namespace cfa;
using tuner::Objective;

namespace {

// Noisy separable quadratic centered at (1.2, 0.6).  The noise is a
// deterministic function of the seed, so CRN evaluations repeat exactly.
Objective noisy_quadratic(double noise_scale) {
  return [noise_scale](const std::vector<double>& theta, std::uint64_t seed,
                       int n_paths) {
    double f = 0.0;
    f += 3.0 * (theta[0] - 1.2) * (theta[0] - 1.2);
    if (theta.size() > 1) f += 2.0 * (theta[1] - 0.6) * (theta[1] - 0.6);
    Rng rng(seed);
    double noise = 0.0;
    for (int i = 0; i < n_paths; ++i) noise += rng.normal();
    return f + noise_scale * noise / n_paths;
  };
}

}  // namespace

TEST_CASE("box projection clamps componentwise") {
  auto p = tuner::project_box({-0.5, 1.0, 3.7}, 0.0, 2.0);
  CHECK(p == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("finite differences recover the analytic gradient") {
  auto objective = noisy_quadratic(0.0);
  std::vector<double> theta{0.9, 1.1};
  auto g = tuner::finite_difference_gradient(objective, theta, 1e-5, 3, 1);
  CHECK(g[0] == doctest::Approx(6.0 * (0.9 - 1.2)).epsilon(1e-4));
  CHECK(g[1] == doctest::Approx(4.0 * (1.1 - 0.6)).epsilon(1e-4));
}

TEST_CASE("simultaneous perturbation agrees with finite differences on average") {
  // In one dimension the SPSA estimate equals the central difference.
  auto objective = noisy_quadratic(0.0);
  std::vector<double> theta{0.8};
  Rng delta_rng(5);
  tuner::SpsaEval eval;
  auto g = tuner::spsa_gradient(objective, theta, 0.05, delta_rng, 17, 1, 0.0,
                                2.0, &eval);
  REQUIRE(g.size() == 1);
  CHECK(g[0] == doctest::Approx(6.0 * (0.8 - 1.2)).epsilon(1e-2));
  CHECK(eval.f_plus != eval.f_minus);

  // Both perturbed evaluations share a seed: with pure noise (flat
  // objective) the estimate is exactly zero.
  auto flat = [](const std::vector<double>&, std::uint64_t seed, int) {
    Rng rng(seed);
    return rng.normal();
  };
  Rng delta2(5);
  auto g0 = tuner::spsa_gradient(flat, {1.0}, 0.05, delta2, 17, 1, 0.0, 2.0);
  CHECK(g0[0] == 0.0);
}

TEST_CASE("spsa perturbations respect the search box") {
  // Center on the boundary: theta +/- c must stay inside [0, 2].
  std::vector<double> seen;
  auto probe = [&seen](const std::vector<double>& theta, std::uint64_t, int) {
    seen.push_back(theta[0]);
    return 0.0;
  };
  Rng delta_rng(1);
  tuner::spsa_gradient(probe, {2.0}, 0.1, delta_rng, 3, 1, 0.0, 2.0);
  REQUIRE(seen.size() == 2);
  for (double v : seen) {
    CHECK(v >= 0.0);
    CHECK(v <= 2.0);
  }
}

TEST_CASE("tuning a noisy quadratic lands near the minimizer") {
  auto objective = noisy_quadratic(0.05);
  tuner::TuneSchedule schedule;
  schedule.iterations = 150;
  schedule.a = 0.15;
  schedule.c = 0.05;
  schedule.batch_paths = 4;
  schedule.validation_paths = 64;
  schedule.lo = 0.0;
  schedule.hi = 2.0;
  auto result = tuner::tune(objective, {0.2, 1.8}, schedule, 42);
  REQUIRE(result.theta_star.size() == 2);
  CHECK(!result.aborted);
  CHECK(result.theta_star[0] == doctest::Approx(1.2).epsilon(0.08));
  CHECK(result.theta_star[1] == doctest::Approx(0.6).epsilon(0.12));
  CHECK(result.trace.iterates.size() == 150);

  // Same seed, same run; different seed, different iterates.
  auto again = tuner::tune(objective, {0.2, 1.8}, schedule, 42);
  CHECK(again.theta_star == result.theta_star);
  auto other = tuner::tune(objective, {0.2, 1.8}, schedule, 43);
  CHECK(other.trace.iterates[0].seed != result.trace.iterates[0].seed);
}

TEST_CASE("iterates never leave the box") {
  auto objective = noisy_quadratic(0.5);
  tuner::TuneSchedule schedule;
  schedule.iterations = 60;
  schedule.a = 5.0;  // absurd step size to force clamping
  schedule.lo = 0.0;
  schedule.hi = 2.0;
  auto result = tuner::tune(objective, {1.0}, schedule, 7);
  for (const auto& it : result.trace.iterates) {
    REQUIRE(it.theta.size() == 1);
    CHECK(it.theta[0] >= 0.0);
    CHECK(it.theta[0] <= 2.0);
  }
}

TEST_CASE("validation picks the best candidate, not the last iterate") {
  // Objective that punishes the region SPSA drifts into late: candidate
  // re-evaluation on the validation seeds must still pick the best theta.
  auto objective = noisy_quadratic(0.02);
  tuner::TuneSchedule schedule;
  schedule.iterations = 40;
  schedule.a = 0.4;
  schedule.c = 0.1;
  schedule.validation_candidates = 4;
  auto result = tuner::tune(objective, {0.3}, schedule, 11);
  double last = result.trace.iterates.back().objective;
  CHECK(result.validation_objective <=
        objective(result.trace.iterates.back().theta, 999, 200) + 0.5);
  CHECK(std::isfinite(last));
}

TEST_CASE("grid search is exhaustive with ties to the earliest point") {
  auto objective = [](const std::vector<double>& theta, std::uint64_t, int) {
    return std::abs(theta[0] - 1.0) + 0.5 * std::abs(theta[1] - 0.5);
  };
  std::vector<std::vector<double>> axes{{0.0, 1.0, 2.0}, {0.5, 1.5}};
  auto result = tuner::grid_search(objective, axes, 3, 2);
  CHECK(result.table.size() == 6);
  CHECK(result.theta_star == std::vector<double>{1.0, 0.5});
  CHECK(result.best_objective == doctest::Approx(0.0));

  auto flat = [](const std::vector<double>&, std::uint64_t, int) { return 1.0; };
  auto tie = tuner::grid_search(flat, axes, 3, 2);
  CHECK(tie.theta_star == std::vector<double>{0.0, 0.5});
}

TEST_CASE("trace serializes to CSV with one row per iteration") {
  tuner::TuneTrace trace;
  trace.iterates.push_back({{1.0, 2.0}, 3.5, 0.25, 9});
  trace.iterates.push_back({{1.1, 1.9}, 3.1, 0.20, 10});
  auto csv = tuner::trace_to_csv(trace);
  CHECK(csv.find("iteration") != std::string::npos);
  CHECK(csv.find("theta_0") != std::string::npos);
  CHECK(csv.find("theta_1") != std::string::npos);
  int rows = 0;
  for (char ch : csv)
    if (ch == '\n') ++rows;
  CHECK(rows == 3);  // header + 2 iterations
}
