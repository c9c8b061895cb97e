#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "cfa/config.hpp"

using namespace cfa;
using config::ConfigError;
using config::ExperimentConfig;
using config::ThetaMode;

namespace {

std::string minimal_energy_json() {
  return R"({
    "problem": "energy",
    "seed": 7,
    "energy": {
      "battery_capacity": 10.0,
      "initial_battery": 5.0,
      "limits": {"grid_to_demand": 100.0},
      "demand_profile": [4.0, 6.0],
      "wind_profile": [3.0, 2.0],
      "price_profile": [30.0],
      "sigma_demand": 0.5,
      "sigma_wind": 0.5,
      "sigma_price": 1.0,
      "horizon": 24,
      "lookahead": 6
    },
    "theta_mode": "tied",
    "theta0": [1.0]
  })";
}

}  // namespace

TEST_CASE("theta dimension and expansion per mode") {
  CHECK(config::theta_dimension(ThetaMode::Tied, 24) == 1);
  CHECK(config::theta_dimension(ThetaMode::WindOnly, 24) == 1);
  CHECK(config::theta_dimension(ThetaMode::Full, 24) == 48);

  auto tied = config::expand_theta(ThetaMode::Tied, 3, {0.7});
  CHECK(tied.demand == std::vector<double>{0.7, 0.7, 0.7});
  CHECK(tied.wind == std::vector<double>{0.7, 0.7, 0.7});

  auto wind_only = config::expand_theta(ThetaMode::WindOnly, 2, {0.4});
  CHECK(wind_only.demand == std::vector<double>{1.0, 1.0});
  CHECK(wind_only.wind == std::vector<double>{0.4, 0.4});

  auto full = config::expand_theta(ThetaMode::Full, 2, {0.1, 0.2, 0.3, 0.4});
  CHECK(full.demand == std::vector<double>{0.1, 0.2});
  CHECK(full.wind == std::vector<double>{0.3, 0.4});

  CHECK_THROWS_AS(config::expand_theta(ThetaMode::Full, 2, {0.1}),
                  std::invalid_argument);
}

TEST_CASE("minimal config parses with defaults filled in") {
  auto c = config::parse_config(minimal_energy_json());
  CHECK(c.problem == "energy");
  CHECK(c.seed == 7);
  CHECK(c.energy.horizon == 24);
  CHECK(c.energy.limits.grid_to_demand == 100.0);
  CHECK(c.energy.limits.wind_to_battery == energy::kUnlimited);
  CHECK(c.theta_mode == ThetaMode::Tied);
  CHECK(c.schedule.iterations > 0);
  CHECK(c.eval_paths > 0);
}

TEST_CASE("unknown keys are rejected with their path") {
  std::string json = minimal_energy_json();
  json.insert(json.rfind('}'), R"(, "typo_key": 1)");
  try {
    config::parse_config(json);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("typo_key") != std::string::npos);
  }

  // Nested unknown keys report the full path.
  std::string nested = minimal_energy_json();
  nested.insert(nested.find("\"horizon\""), "\"windy\": 3, ");
  try {
    config::parse_config(nested);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("energy") != std::string::npos);
    CHECK(msg.find("windy") != std::string::npos);
  }
}

TEST_CASE("missing and mistyped fields name the field") {
  try {
    config::parse_config(R"({"problem": "energy"})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("energy") != std::string::npos);
  }

  std::string bad_type = minimal_energy_json();
  auto pos = bad_type.find("\"horizon\": 24");
  bad_type.replace(pos, 13, "\"horizon\": \"two dozen\"");
  try {
    config::parse_config(bad_type);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("horizon") != std::string::npos);
  }

  CHECK_THROWS_AS(config::parse_config("not json at all"), ConfigError);
}

TEST_CASE("validation catches inconsistent settings") {
  auto c = config::parse_config(minimal_energy_json());
  c.theta0 = {1.0, 1.0};  // tied mode wants exactly one component
  CHECK_THROWS_AS(config::validate(c), ConfigError);

  c = config::parse_config(minimal_energy_json());
  c.theta0 = {5.0};  // outside [theta_lo, theta_hi]
  CHECK_THROWS_AS(config::validate(c), ConfigError);

  c = config::parse_config(minimal_energy_json());
  c.energy.horizon = 0;
  CHECK_THROWS_AS(config::validate(c), ConfigError);
}

TEST_CASE("JSON round-trip is exact") {
  auto c = config::default_energy_benchmark();
  auto text = config::to_json_text(c);
  auto back = config::parse_config(text);
  CHECK(config::to_json_text(back) == text);
  CHECK(back.seed == c.seed);
  CHECK(back.energy.sigma_wind == c.energy.sigma_wind);
  CHECK(back.theta_mode == c.theta_mode);
  CHECK(back.theta0 == c.theta0);
  CHECK(back.schedule.a == c.schedule.a);

  // Round-trip also holds for a custom parsed config.
  auto parsed = config::parse_config(minimal_energy_json());
  auto text2 = config::to_json_text(parsed);
  CHECK(config::to_json_text(config::parse_config(text2)) == text2);
}

TEST_CASE("default benchmark is valid and tunable") {
  auto c = config::default_energy_benchmark();
  CHECK_NOTHROW(config::validate(c));
  CHECK(c.problem == "energy");
  CHECK(c.energy.horizon == 168);
  CHECK(c.energy.lookahead == 24);
  CHECK(c.theta0.size() ==
        static_cast<std::size_t>(
            config::theta_dimension(c.theta_mode, c.energy.lookahead)));
}

TEST_CASE("bandit and shortest-path blocks parse") {
  auto c = config::parse_config(R"({
    "problem": "bandit",
    "seed": 3,
    "bandit": {
      "true_means": [0.1, 0.5, 0.9],
      "noise_sigma": 1.0,
      "horizon": 100,
      "theta_grid": [0.0, 0.5, 1.0],
      "n_seeds": 50
    }
  })");
  CHECK(c.problem == "bandit");
  CHECK(c.bandit.testbed.true_means.size() == 3);
  CHECK(c.bandit.theta_grid.size() == 3);
  CHECK(c.bandit.n_seeds == 50);
  CHECK_NOTHROW(config::validate(c));

  auto s = config::parse_config(R"({
    "problem": "shortest-path",
    "seed": 4,
    "shortest_path": {
      "links": [[0, 1, 5.0, 4.0], [1, 3, 5.0, 4.0],
                [0, 2, 6.0, 0.5], [2, 3, 6.0, 0.5]],
      "origin": 0,
      "theta_grid": [0.2, 0.5, 0.8],
      "n_seeds": 25,
      "deadline": 12.0,
      "late_penalty_rate": 50.0
    }
  })");
  CHECK(s.spath.graph.num_nodes == 4);
  CHECK(s.spath.graph.destination == 3);
  CHECK(s.spath.options.deadline == 12.0);
  CHECK_NOTHROW(config::validate(s));

  // Percentiles must stay strictly inside (0, 1).
  auto bad = s;
  bad.spath.theta_grid = {0.0, 0.5};
  CHECK_THROWS_AS(config::validate(bad), ConfigError);
}
