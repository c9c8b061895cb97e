#include "cfa/forecast.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cfa {

namespace {
double clamp0(double v) { return v < 0.0 ? 0.0 : v; }
}  // namespace

ForecastVector evolve_forecast(const ForecastVector& forecast,
                               const ForecastNoise& noise,
                               const Profile& tail_profile) {
  const int horizon = forecast.lag_count();
  if (static_cast<int>(noise.increments.size()) != horizon)
    throw std::invalid_argument("forecast/noise length mismatch");
  if (horizon == 0)
    throw std::invalid_argument("cannot evolve a forecast with no lags");
  if (tail_profile.empty())
    throw std::invalid_argument("tail profile is empty");

  ForecastVector next;
  next.base_time = forecast.base_time + 1;
  next.actual = clamp0(forecast.lags[0] + noise.increments[0]);
  next.lags.resize(static_cast<std::size_t>(horizon));
  for (int k = 0; k + 1 < horizon; ++k)
    next.lags[k] = clamp0(forecast.lags[k + 1] + noise.increments[k + 1]);
  next.lags[horizon - 1] = clamp0(tail_profile.at(next.base_time + horizon));
  return next;
}

double realize_actual(const ForecastVector& evolved) { return evolved.actual; }

ForecastNoise sample_noise(double sigma, int horizon, Rng& rng) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  ForecastNoise noise;
  noise.sigma = sigma;
  noise.increments.resize(static_cast<std::size_t>(horizon));
  for (auto& e : noise.increments) e = sigma == 0.0 ? 0.0 : sigma * rng.normal();
  return noise;
}

ForecastVector init_forecast(const Profile& profile, std::int64_t t, int horizon) {
  if (profile.empty()) throw std::invalid_argument("profile is empty");
  ForecastVector f;
  f.base_time = t;
  f.actual = clamp0(profile.at(t));
  f.lags.resize(static_cast<std::size_t>(horizon));
  for (int tau = 1; tau <= horizon; ++tau)
    f.lags[tau - 1] = clamp0(profile.at(t + tau));
  return f;
}

std::vector<ForecastVector> load_forecast_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open forecast CSV: " + path);
  std::vector<ForecastVector> rows;
  std::string line;
  std::int64_t t = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ForecastVector f;
    f.base_time = t++;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.lags.push_back(std::stod(cell));
    if (!rows.empty() && rows.front().lags.size() != f.lags.size())
      throw std::runtime_error("ragged forecast CSV: " + path);
    rows.push_back(std::move(f));
  }
  return rows;
}

}  // namespace cfa
