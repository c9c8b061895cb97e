#pragma once

#include <vector>

#include "cfa/energy.hpp"
#include "cfa/lp.hpp"

namespace cfa::lookahead {

// Forecast-discount coefficients by lag (1..H), one vector per stream.
struct ThetaVector {
  std::vector<double> demand;
  std::vector<double> wind;

  static ThetaVector ones(int horizon) {
    return {std::vector<double>(horizon, 1.0), std::vector<double>(horizon, 1.0)};
  }
  // Single shared coefficient for both streams at every lag.
  static ThetaVector tied(double value, int horizon) {
    return {std::vector<double>(horizon, value), std::vector<double>(horizon, value)};
  }
  int lags() const { return static_cast<int>(demand.size()); }
};

enum class Flow : int {
  WindToDemand = 0,
  WindToBattery = 1,
  GridToDemand = 2,
  GridToBattery = 3,
  BatteryToDemand = 4,
};

// Index map from (flow kind, lag) and (storage, lag) to LP columns.  Lag 0
// is the implemented period; storage(k) is the battery level after period
// k - 1, for k = 1 .. periods.
struct LookaheadLayout {
  int periods = 0;  // lags 0 .. periods - 1

  int flow(Flow f, int lag) const { return lag * 5 + static_cast<int>(f); }
  int storage(int k) const { return periods * 5 + (k - 1); }
  int num_vars() const { return periods * 6; }
};

struct LookaheadModel {
  lp::LinearProgram program;
  LookaheadLayout layout;
  // A feasible starting basis (grid covers all demand, storage carried flat);
  // skips simplex phase 1.
  std::vector<int> warm_basis;
};

// Deterministic lookahead LP for the current state with forecast right-hand
// sides scaled by theta.  The effective horizon is min(config.lookahead,
// remaining decision periods); terminal storage carries no value.
LookaheadModel build_lookahead(const energy::EnergyState& state,
                               const ThetaVector& theta,
                               const energy::EnergyConfig& config);

// Classical (unparameterized) build: identical construction with raw
// forecast right-hand sides.
LookaheadModel build_lookahead_classical(const energy::EnergyState& state,
                                         const energy::EnergyConfig& config);

// Solve the lookahead and return the first-period flows.  Throws on an
// infeasible or unbounded lookahead (either indicates a configuration bug);
// the infeasible message carries the LP text dump.
energy::EnergyDecision cfa_policy(const energy::EnergyState& state,
                                  const ThetaVector& theta,
                                  const energy::EnergyConfig& config);

// Policy functor for the simulation harness.
class CfaPolicy {
 public:
  CfaPolicy(ThetaVector theta, energy::EnergyConfig config)
      : theta_(std::move(theta)), config_(std::move(config)) {}

  energy::EnergyDecision operator()(const energy::EnergyState& s) const {
    return cfa_policy(s, theta_, config_);
  }
  const ThetaVector& theta() const { return theta_; }

 private:
  ThetaVector theta_;
  energy::EnergyConfig config_;
};

}  // namespace cfa::lookahead
