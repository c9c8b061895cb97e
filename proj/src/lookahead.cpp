#include "cfa/lookahead.hpp"

#include <algorithm>
#include <stdexcept>

namespace cfa::lookahead {

namespace {

// theta == nullptr builds the classical model (raw forecasts).
LookaheadModel build(const energy::EnergyState& s, const ThetaVector* theta,
                     const energy::EnergyConfig& c) {
  const int remaining = static_cast<int>(c.horizon - 1 - s.time);
  const int future = std::max(0, std::min(c.lookahead, remaining));
  if (theta && theta->lags() < future)
    throw std::invalid_argument("theta has fewer lags than the lookahead needs");
  if (s.demand_forecast.lag_count() < future ||
      s.wind_forecast.lag_count() < future)
    throw std::invalid_argument("state forecasts shorter than the lookahead");

  LookaheadModel model;
  model.layout.periods = future + 1;
  auto& prog = model.program;
  const auto& layout = model.layout;
  const auto& u = c.limits;

  // Flow variables, lag-major: lag 0 uses actuals, lags >= 1 forecasts.
  for (int k = 0; k <= future; ++k) {
    double p = energy::price_forecast(c, s, k);
    prog.add_variable(0.0, u.wind_to_demand, 0.0);                 // WindToDemand
    prog.add_variable(0.0, u.wind_to_battery, 0.0);                // WindToBattery
    prog.add_variable(0.0, u.grid_to_demand, p);                   // GridToDemand
    prog.add_variable(-u.grid_to_battery, u.grid_to_battery, p);   // GridToBattery
    prog.add_variable(0.0, u.battery_to_demand, 0.0);              // BatteryToDemand
  }
  // Storage after each period.
  for (int k = 1; k <= future + 1; ++k)
    prog.add_variable(0.0, c.battery_capacity, 0.0);

  model.warm_basis.reserve(4 * (future + 1));
  for (int k = 0; k <= future; ++k) {
    const int wtd = layout.flow(Flow::WindToDemand, k);
    const int wtb = layout.flow(Flow::WindToBattery, k);
    const int gtd = layout.flow(Flow::GridToDemand, k);
    const int gtb = layout.flow(Flow::GridToBattery, k);
    const int btd = layout.flow(Flow::BatteryToDemand, k);
    const int store_next = layout.storage(k + 1);

    const double prev_storage_rhs = k == 0 ? s.battery : 0.0;
    double demand_rhs, wind_rhs;
    if (k == 0) {
      demand_rhs = s.demand;
      wind_rhs = s.wind;
    } else if (theta) {
      demand_rhs = theta->demand[k - 1] * s.demand_forecast.at_lag(k);
      wind_rhs = theta->wind[k - 1] * s.wind_forecast.at_lag(k);
    } else {
      demand_rhs = s.demand_forecast.at_lag(k);
      wind_rhs = s.wind_forecast.at_lag(k);
    }

    // Battery withdrawal limited to what is stored.
    std::vector<std::pair<int, double>> withdraw = {
        {btd, 1.0}, {gtb, -1.0}, {wtb, -1.0}};
    if (k > 0) withdraw.emplace_back(layout.storage(k), -1.0);
    prog.add_constraint(std::move(withdraw), lp::Sense::LessEqual,
                        prev_storage_rhs);

    // Storage balance.
    std::vector<std::pair<int, double>> balance = {
        {store_next, 1.0}, {gtb, -1.0}, {wtb, -1.0}, {btd, 1.0}};
    if (k > 0) balance.emplace_back(layout.storage(k), -1.0);
    prog.add_constraint(std::move(balance), lp::Sense::Equal, prev_storage_rhs);

    // Demand balance.
    prog.add_constraint({{wtd, 1.0}, {btd, 1.0}, {gtd, 1.0}}, lp::Sense::Equal,
                        demand_rhs);

    // Wind availability.
    prog.add_constraint({{wtb, 1.0}, {wtd, 1.0}}, lp::Sense::LessEqual,
                        wind_rhs);

    // Feasible basis: withdraw/wind rows on their slacks, storage rows on
    // the carried storage variable, demand rows on grid supply.
    const int n = layout.num_vars();
    model.warm_basis.push_back(n + 4 * k);      // withdraw slack
    model.warm_basis.push_back(store_next);     // storage balance
    model.warm_basis.push_back(gtd);            // demand balance
    model.warm_basis.push_back(n + 4 * k + 3);  // wind slack
  }
  return model;
}

}  // namespace

LookaheadModel build_lookahead(const energy::EnergyState& state,
                               const ThetaVector& theta,
                               const energy::EnergyConfig& config) {
  return build(state, &theta, config);
}

LookaheadModel build_lookahead_classical(const energy::EnergyState& state,
                                         const energy::EnergyConfig& config) {
  return build(state, nullptr, config);
}

energy::EnergyDecision cfa_policy(const energy::EnergyState& state,
                                  const ThetaVector& theta,
                                  const energy::EnergyConfig& config) {
  LookaheadModel model = build_lookahead(state, theta, config);
  lp::SolveOptions opt;
  opt.initial_basis = model.warm_basis;
  lp::LpSolution sol = lp::solve(model.program, opt);
  if (sol.status == lp::LpStatus::Infeasible)
    throw std::runtime_error("lookahead LP infeasible (configuration bug):\n" +
                             lp::to_text(model.program));
  if (sol.status == lp::LpStatus::Unbounded)
    throw std::runtime_error("lookahead LP unbounded: missing flow bound");
  if (sol.status != lp::LpStatus::Optimal)
    throw std::runtime_error("lookahead LP solve failed: " + sol.note);

  const auto& layout = model.layout;
  energy::EnergyDecision x;
  x.wind_to_demand = sol.values[layout.flow(Flow::WindToDemand, 0)];
  x.wind_to_battery = sol.values[layout.flow(Flow::WindToBattery, 0)];
  x.grid_to_demand = sol.values[layout.flow(Flow::GridToDemand, 0)];
  x.grid_to_battery = sol.values[layout.flow(Flow::GridToBattery, 0)];
  x.battery_to_demand = sol.values[layout.flow(Flow::BatteryToDemand, 0)];
  return x;
}

}  // namespace cfa::lookahead
