#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cfa/forecast.hpp"
#include "cfa/rng.hpp"

namespace cfa::energy {

constexpr double kUnlimited = std::numeric_limits<double>::infinity();

// Per-flow transmission limits (MWh per period).  grid_to_battery bounds the
// magnitude of the signed grid<->battery flow.
struct FlowLimits {
  double wind_to_demand = kUnlimited;
  double wind_to_battery = kUnlimited;
  double grid_to_demand = kUnlimited;
  double grid_to_battery = kUnlimited;
  double battery_to_demand = kUnlimited;
};

struct EnergyConfig {
  double battery_capacity = 0.0;  // MWh
  double initial_battery = 0.0;
  FlowLimits limits;

  Profile demand_profile;  // hourly long-run demand (MWh)
  Profile wind_profile;    // hourly long-run wind energy (MWh)
  double sigma_demand = 0.0;
  double sigma_wind = 0.0;

  // Grid price: hourly profile plus a mean-reverting random-walk deviation,
  //   p_t = price_profile(t) + w_t,  w_{t+1} = (1 - reversion) w_t + step.
  // A single-entry flat profile with reversion 0 is a pure random walk.
  Profile price_profile;
  double sigma_price = 0.0;
  double price_reversion = 0.0;              // in [0, 1]
  std::optional<double> price_floor;         // default: negative prices allowed

  int horizon = 0;    // T, number of decision periods
  int lookahead = 0;  // H, forecast lags carried in the state

  double theta_lo = 0.0;
  double theta_hi = 2.0;
};

struct EnergyState {
  double battery = 0.0;  // R_t, MWh in storage
  double demand = 0.0;   // D_t
  double wind = 0.0;     // E_t
  double price = 0.0;    // p_t, $/MWh
  ForecastVector demand_forecast;
  ForecastVector wind_forecast;
  std::int64_t time = 0;
};

// The five flows, MWh this period.  grid_to_battery is signed: positive
// charges from the grid, negative sells stored energy back.
struct EnergyDecision {
  double wind_to_demand = 0.0;
  double wind_to_battery = 0.0;
  double grid_to_demand = 0.0;
  double grid_to_battery = 0.0;
  double battery_to_demand = 0.0;
};

struct EnergyExogenous {
  ForecastNoise demand_noise;
  ForecastNoise wind_noise;
  double price_step = 0.0;
};

// Throws std::invalid_argument with a field-level message on bad configs;
// also enforces that grid supply can always cover the largest scaled demand
// the lookahead can write (theta_hi * peak demand profile).
void validate_config(const EnergyConfig& config);

std::vector<std::string> check_decision(const EnergyState& state,
                                        const EnergyDecision& decision,
                                        const EnergyConfig& config,
                                        double tol = 1e-6);

double contribution(const EnergyState& state, const EnergyDecision& decision);

EnergyState transition(const EnergyState& state, const EnergyDecision& decision,
                       const EnergyExogenous& w, const EnergyConfig& config);

// Price the lookahead sees for lag k >= 0: the deterministic profile plus
// the current deviation decayed by the mean-reversion factor.  Flat profile,
// no reversion reduces to a constant p_t forecast.
double price_forecast(const EnergyConfig& config, const EnergyState& state, int lag);

class EnergyProblem {
 public:
  using State = EnergyState;
  using Decision = EnergyDecision;
  using Exogenous = EnergyExogenous;

  explicit EnergyProblem(EnergyConfig config);

  int horizon() const { return config_.horizon; }
  const EnergyConfig& config() const { return config_; }

  State initial_state() const;
  Exogenous sample_exogenous(int t, Rng& rng) const;
  State transition(const State& s, const Decision& x, const Exogenous& w) const {
    return energy::transition(s, x, w, config_);
  }
  double contribution(const State& s, const Decision& x) const {
    return energy::contribution(s, x);
  }
  std::vector<std::string> check_decision(const State& s, const Decision& x) const {
    return energy::check_decision(s, x, config_);
  }

 private:
  EnergyConfig config_;
};

}  // namespace cfa::energy
