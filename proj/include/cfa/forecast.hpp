#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfa/rng.hpp"

namespace cfa {

// Periodic profile giving the long-run level of a quantity by hour of day
// (or any period length); used to seed forecasts and to initialize the
// farthest lag after each forecast roll.
struct Profile {
  std::vector<double> values;

  double at(std::int64_t t) const {
    auto n = static_cast<std::int64_t>(values.size());
    std::int64_t k = t % n;
    if (k < 0) k += n;
    return values[static_cast<std::size_t>(k)];
  }
  bool empty() const { return values.empty(); }
};

// Rolling forecast issued at `base_time`: lags[k] predicts the quantity at
// base_time + k + 1.  `actual` is the lag-0 (realized) value for base_time
// itself.  All entries are clamped at zero.
struct ForecastVector {
  std::int64_t base_time = 0;
  double actual = 0.0;
  std::vector<double> lags;

  int lag_count() const { return static_cast<int>(lags.size()); }
  // Forecast for target base_time + tau, tau in 1..H.
  double at_lag(int tau) const { return lags[static_cast<std::size_t>(tau - 1)]; }
};

// One period's worth of forecast updates.  increments[k] is the zero-mean
// change applied to the target previously forecast at lag k+1; the entry
// for lag 1 is the deviation between the realized value and its one-period
// forecast.
struct ForecastNoise {
  std::vector<double> increments;
  double sigma = 0.0;
};

// Roll a forecast from base_time to base_time + 1: every retained target
// keeps its value plus one noise increment, the realized value is what was
// forecast at lag 1 plus its increment, and the new farthest lag comes from
// the long-run profile.  Entries are clamped at zero after the update.
ForecastVector evolve_forecast(const ForecastVector& forecast,
                               const ForecastNoise& noise,
                               const Profile& tail_profile);

// Realized value carried by a forecast that has been evolved to its base
// time (the lag-0 entry).
double realize_actual(const ForecastVector& evolved);

// H i.i.d. N(0, sigma^2) increments.
ForecastNoise sample_noise(double sigma, int horizon, Rng& rng);

// Forecast at time t whose entries follow the profile: lag tau predicts
// profile(t + tau).
ForecastVector init_forecast(const Profile& profile, std::int64_t t, int horizon);

// Read a matrix of historical forecasts: one row per issue time, columns
// are lags 1..H (comma separated, optional '#' comment lines).  Row i
// becomes the forecast issued at base_time = i with actual = 0.
std::vector<ForecastVector> load_forecast_csv(const std::string& path);

}  // namespace cfa
