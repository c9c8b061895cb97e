#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "cfa/config.hpp"
#include "cfa/energy.hpp"

using namespace cfa;
using energy::EnergyConfig;
using energy::EnergyDecision;
using energy::EnergyState;

namespace {

EnergyConfig small_config() {
  EnergyConfig c;
  c.battery_capacity = 10.0;
  c.initial_battery = 5.0;
  c.limits.grid_to_demand = 100.0;
  c.demand_profile.values = {4.0};
  c.wind_profile.values = {3.0};
  c.price_profile.values = {30.0};
  c.sigma_demand = 0.5;
  c.sigma_wind = 0.5;
  c.sigma_price = 1.0;
  c.price_reversion = 0.0;
  c.horizon = 8;
  c.lookahead = 4;
  return c;
}

EnergyState basic_state() {
  EnergyState s;
  s.battery = 5.0;
  s.demand = 6.0;
  s.wind = 4.0;
  s.price = 30.0;
  s.demand_forecast = init_forecast(Profile{{6.0}}, 0, 4);
  s.wind_forecast = init_forecast(Profile{{4.0}}, 0, 4);
  return s;
}

}  // namespace

TEST_CASE("contribution charges grid purchases at the spot price") {
  EnergyState s = basic_state();
  EnergyDecision x;
  x.grid_to_demand = 2.0;
  x.grid_to_battery = 4.0;
  CHECK(energy::contribution(s, x) == doctest::Approx(30.0 * 6.0));

  // Selling from the battery back to the grid earns the same price.
  x.grid_to_demand = 0.0;
  x.grid_to_battery = -3.0;
  CHECK(energy::contribution(s, x) == doctest::Approx(-90.0));

  // Wind and battery flows to demand are free.
  EnergyDecision y;
  y.wind_to_demand = 4.0;
  y.battery_to_demand = 2.0;
  CHECK(energy::contribution(s, y) == 0.0);
}

TEST_CASE("transition applies storage arithmetic and price reversion") {
  EnergyConfig c = small_config();
  EnergyState s = basic_state();
  EnergyDecision x;
  x.wind_to_battery = 2.0;
  x.grid_to_battery = 1.0;
  x.battery_to_demand = 3.0;
  x.wind_to_demand = 2.0;
  x.grid_to_demand = 1.0;

  energy::EnergyExogenous w;
  w.demand_noise.increments.assign(4, 0.0);
  w.wind_noise.increments.assign(4, 0.0);
  w.price_step = -4.0;

  auto next = energy::transition(s, x, w, c);
  CHECK(next.battery == doctest::Approx(5.0 + 2.0 + 1.0 - 3.0));
  CHECK(next.time == s.time + 1);
  // Flat profile at 30, deviation 0, reversion 0: price moves by the step.
  CHECK(next.price == doctest::Approx(26.0));
  // Realized demand and wind come from the evolved lag-1 forecasts.
  CHECK(next.demand == doctest::Approx(6.0));
  CHECK(next.wind == doctest::Approx(4.0));
}

TEST_CASE("price floor clips the realized price") {
  EnergyConfig c = small_config();
  c.price_floor = 0.0;
  EnergyState s = basic_state();
  s.price = 2.0;
  energy::EnergyExogenous w;
  w.demand_noise.increments.assign(4, 0.0);
  w.wind_noise.increments.assign(4, 0.0);
  w.price_step = -10.0;
  EnergyDecision cover;
  cover.grid_to_demand = s.demand;
  auto next = energy::transition(s, cover, w, c);
  CHECK(next.price == 0.0);

  c.price_floor.reset();
  auto free = energy::transition(s, cover, w, c);
  CHECK(free.price == doctest::Approx(-8.0));
}

TEST_CASE("price forecast decays the deviation toward the profile") {
  EnergyConfig c = small_config();
  c.price_profile.values = {30.0, 40.0};
  c.price_reversion = 0.5;
  EnergyState s = basic_state();
  s.time = 0;
  s.price = 34.0;  // deviation +4 over profile(0)=30
  CHECK(energy::price_forecast(c, s, 0) == doctest::Approx(34.0));
  CHECK(energy::price_forecast(c, s, 1) == doctest::Approx(40.0 + 2.0));
  CHECK(energy::price_forecast(c, s, 2) == doctest::Approx(30.0 + 1.0));

  // Flat profile without reversion: the forecast is just today's price.
  EnergyConfig flat = small_config();
  CHECK(energy::price_forecast(flat, s, 7) == doctest::Approx(34.0));
}

TEST_CASE("check_decision enforces balances, limits and box constraints") {
  EnergyConfig c = small_config();
  c.limits.wind_to_battery = 1.0;
  EnergyState s = basic_state();  // battery 5, demand 6, wind 4

  EnergyDecision ok;
  ok.wind_to_demand = 4.0;
  ok.battery_to_demand = 2.0;
  CHECK(energy::check_decision(s, ok, c).empty());

  SUBCASE("demand must be met exactly") {
    EnergyDecision x;
    x.wind_to_demand = 4.0;
    CHECK(!energy::check_decision(s, x, c).empty());
  }
  SUBCASE("wind usage cannot exceed available wind") {
    EnergyDecision x;
    x.wind_to_demand = 5.0;
    x.grid_to_demand = 1.0;
    CHECK(!energy::check_decision(s, x, c).empty());
  }
  SUBCASE("battery cannot go below empty or above capacity") {
    EnergyDecision drain;
    drain.battery_to_demand = 6.0;
    CHECK(!energy::check_decision(s, drain, c).empty());

    EnergyDecision fill = ok;
    fill.grid_to_battery = 8.0;  // 5 + 8 - 2 > 10
    CHECK(!energy::check_decision(s, fill, c).empty());
  }
  SUBCASE("flow limits and signs are reported by name") {
    EnergyDecision x = ok;
    x.wind_to_demand = 2.0;
    x.wind_to_battery = 2.0;  // limit is 1
    x.grid_to_demand = 2.0;
    auto v = energy::check_decision(s, x, c);
    REQUIRE(!v.empty());
    bool mentions = false;
    for (const auto& m : v)
      if (m.find("wind_to_battery") != std::string::npos) mentions = true;
    CHECK(mentions);

    EnergyDecision neg;
    neg.wind_to_demand = 6.0;
    neg.battery_to_demand = -1.0;
    CHECK(!energy::check_decision(s, neg, c).empty());
  }
}

TEST_CASE("validate_config names the offending field") {
  auto expect_throw = [](EnergyConfig c, const char* needle) {
    try {
      energy::validate_config(c);
      FAIL_CHECK("expected invalid_argument for " << needle);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_throw([] { auto c = small_config(); c.horizon = 0; return c; }(),
               "horizon");
  expect_throw([] { auto c = small_config(); c.lookahead = 0; return c; }(),
               "lookahead");
  expect_throw([] { auto c = small_config(); c.sigma_wind = -1.0; return c; }(),
               "sigma_wind");
  expect_throw([] { auto c = small_config(); c.initial_battery = 11.0; return c; }(),
               "initial_battery");
  expect_throw([] { auto c = small_config(); c.demand_profile.values.clear(); return c; }(),
               "demand_profile");
  expect_throw([] { auto c = small_config(); c.price_reversion = 1.5; return c; }(),
               "price_reversion");
  // Grid import capacity must cover the worst scaled demand.
  expect_throw([] { auto c = small_config(); c.limits.grid_to_demand = 6.0; return c; }(),
               "grid_to_demand");

  CHECK_NOTHROW(energy::validate_config(small_config()));
  CHECK_NOTHROW(
      energy::validate_config(config::default_energy_benchmark().energy));
}

TEST_CASE("sampled paths stay within physical ranges") {
  EnergyConfig c = small_config();
  energy::EnergyProblem problem(c);
  auto s = problem.initial_state();
  CHECK(s.battery == 5.0);
  CHECK(s.demand == 4.0);
  CHECK(s.wind == 3.0);
  CHECK(s.price == 30.0);
  CHECK(s.demand_forecast.lag_count() == 4);

  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    auto w = problem.sample_exogenous(t, rng);
    REQUIRE(w.demand_noise.increments.size() == 4);
    REQUIRE(w.wind_noise.increments.size() == 4);
    EnergyDecision cover;
    cover.grid_to_demand = s.demand;
    s = problem.transition(s, cover, w);
    CHECK(s.demand >= 0.0);
    CHECK(s.wind >= 0.0);
    for (int tau = 1; tau <= 4; ++tau) {
      CHECK(s.demand_forecast.at_lag(tau) >= 0.0);
      CHECK(s.wind_forecast.at_lag(tau) >= 0.0);
    }
  }
}
