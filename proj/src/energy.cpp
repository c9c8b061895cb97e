#include "cfa/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cfa::energy {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw std::invalid_argument(field + ": " + why);
}

double peak(const Profile& p) {
  double mx = 0.0;
  for (double v : p.values) mx = std::max(mx, v);
  return mx;
}

}  // namespace

void validate_config(const EnergyConfig& c) {
  require(c.battery_capacity >= 0.0, "battery_capacity", "must be >= 0");
  require(c.initial_battery >= 0.0 && c.initial_battery <= c.battery_capacity,
          "initial_battery", "must be in [0, battery_capacity]");
  require(!c.demand_profile.empty(), "demand_profile", "must not be empty");
  require(!c.wind_profile.empty(), "wind_profile", "must not be empty");
  require(!c.price_profile.empty(), "price_profile", "must not be empty");
  for (double v : c.demand_profile.values)
    require(v >= 0.0, "demand_profile", "entries must be >= 0");
  for (double v : c.wind_profile.values)
    require(v >= 0.0, "wind_profile", "entries must be >= 0");
  require(c.sigma_demand >= 0.0, "sigma_demand", "must be >= 0");
  require(c.sigma_wind >= 0.0, "sigma_wind", "must be >= 0");
  require(c.sigma_price >= 0.0, "sigma_price", "must be >= 0");
  require(c.price_reversion >= 0.0 && c.price_reversion <= 1.0,
          "price_reversion", "must be in [0, 1]");
  require(c.horizon >= 1, "horizon", "must be >= 1");
  require(c.lookahead >= 1, "lookahead", "must be >= 1");
  require(c.theta_lo <= c.theta_hi, "theta_lo", "must be <= theta_hi");
  const auto& u = c.limits;
  require(u.wind_to_demand >= 0.0 && u.wind_to_battery >= 0.0 &&
              u.grid_to_demand >= 0.0 && u.grid_to_battery >= 0.0 &&
              u.battery_to_demand >= 0.0,
          "limits", "must be >= 0");
  // The lookahead writes demand-balance equalities with right-hand side up
  // to theta_hi * forecast demand; grid supply must be able to cover them.
  require(u.grid_to_demand >= c.theta_hi * peak(c.demand_profile),
          "limits.grid_to_demand",
          "must cover theta_hi * peak demand so grid supply is always feasible");
}

std::vector<std::string> check_decision(const EnergyState& s,
                                        const EnergyDecision& x,
                                        const EnergyConfig& c, double tol) {
  std::vector<std::string> v;
  auto flag = [&](const std::string& msg) { v.push_back(msg); };
  std::ostringstream os;

  auto nonneg = [&](double val, const char* name) {
    if (val < -tol) flag(std::string(name) + " is negative");
  };
  nonneg(x.wind_to_demand, "wind_to_demand");
  nonneg(x.wind_to_battery, "wind_to_battery");
  nonneg(x.grid_to_demand, "grid_to_demand");
  nonneg(x.battery_to_demand, "battery_to_demand");

  const auto& u = c.limits;
  auto within = [&](double val, double lim, const char* name) {
    if (val > lim + tol) flag(std::string(name) + " exceeds transmission limit");
  };
  within(x.wind_to_demand, u.wind_to_demand, "wind_to_demand");
  within(x.wind_to_battery, u.wind_to_battery, "wind_to_battery");
  within(x.grid_to_demand, u.grid_to_demand, "grid_to_demand");
  within(std::fabs(x.grid_to_battery), u.grid_to_battery, "grid_to_battery");
  within(x.battery_to_demand, u.battery_to_demand, "battery_to_demand");

  double withdraw = x.battery_to_demand - x.grid_to_battery - x.wind_to_battery;
  if (withdraw > s.battery + tol)
    flag("battery withdrawal exceeds stored energy");

  double next_r = s.battery + x.grid_to_battery + x.wind_to_battery -
                  x.battery_to_demand;
  if (next_r < -tol) flag("storage would go negative");
  if (next_r > c.battery_capacity + tol) flag("storage would exceed capacity");

  double served = x.wind_to_demand + x.battery_to_demand + x.grid_to_demand;
  if (std::fabs(served - s.demand) > tol) {
    os.str("");
    os << "demand balance violated: served " << served << " vs demand " << s.demand;
    flag(os.str());
  }

  if (x.wind_to_battery + x.wind_to_demand > s.wind + tol)
    flag("wind usage exceeds available wind energy");

  return v;
}

double contribution(const EnergyState& s, const EnergyDecision& x) {
  return s.price * (x.grid_to_battery + x.grid_to_demand);
}

double price_forecast(const EnergyConfig& c, const EnergyState& s, int lag) {
  double deviation = s.price - c.price_profile.at(s.time);
  double decay = std::pow(1.0 - c.price_reversion, lag);
  return c.price_profile.at(s.time + lag) + decay * deviation;
}

EnergyState transition(const EnergyState& s, const EnergyDecision& x,
                       const EnergyExogenous& w, const EnergyConfig& c) {
  auto violations = check_decision(s, x, c);
  if (!violations.empty()) {
    std::string msg = "transition on infeasible decision:";
    for (const auto& m : violations) msg += " " + m + ";";
    throw std::invalid_argument(msg);
  }

  EnergyState next;
  next.time = s.time + 1;
  next.battery = s.battery + x.wind_to_battery + x.grid_to_battery -
                 x.battery_to_demand;
  next.demand_forecast = evolve_forecast(s.demand_forecast, w.demand_noise,
                                         c.demand_profile);
  next.wind_forecast = evolve_forecast(s.wind_forecast, w.wind_noise,
                                       c.wind_profile);
  next.demand = realize_actual(next.demand_forecast);
  next.wind = realize_actual(next.wind_forecast);

  double deviation = s.price - c.price_profile.at(s.time);
  next.price = c.price_profile.at(next.time) +
               (1.0 - c.price_reversion) * deviation + w.price_step;
  if (c.price_floor && next.price < *c.price_floor) next.price = *c.price_floor;
  return next;
}

EnergyProblem::EnergyProblem(EnergyConfig config) : config_(std::move(config)) {
  validate_config(config_);
}

EnergyState EnergyProblem::initial_state() const {
  EnergyState s;
  s.time = 0;
  s.battery = config_.initial_battery;
  s.demand_forecast = init_forecast(config_.demand_profile, 0, config_.lookahead);
  s.wind_forecast = init_forecast(config_.wind_profile, 0, config_.lookahead);
  s.demand = s.demand_forecast.actual;
  s.wind = s.wind_forecast.actual;
  s.price = config_.price_profile.at(0);
  return s;
}

EnergyExogenous EnergyProblem::sample_exogenous(int /*t*/, Rng& rng) const {
  // Fixed draw order (demand, wind, price) keeps paths reproducible.
  EnergyExogenous w;
  w.demand_noise = sample_noise(config_.sigma_demand, config_.lookahead, rng);
  w.wind_noise = sample_noise(config_.sigma_wind, config_.lookahead, rng);
  w.price_step = config_.sigma_price == 0.0 ? 0.0 : config_.sigma_price * rng.normal();
  return w;
}

}  // namespace cfa::energy
