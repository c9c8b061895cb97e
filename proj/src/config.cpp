#include "cfa/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cfa::config {

using nlohmann::json;

namespace {

// Wraps one JSON object, tracks which keys were consumed, and reports
// leftovers as unknown-key errors with the full field path.
class Node {
 public:
  Node(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) {
    if (!obj_.contains(key)) return false;
    seen_.insert(key);
    return true;
  }

  const json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError(path_ + "." + key + ": missing required field");
    return obj_.at(key);
  }

  Node child(const std::string& key) { return Node(raw(key), path_ + "." + key); }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(path_ + "." + key + ": expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) {
    return obj_.contains(key) ? number(key) : fallback;
  }

  int integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(path_ + "." + key + ": expected an integer");
    return v.get<int>();
  }
  int integer(const std::string& key, int fallback) {
    return obj_.contains(key) ? integer(key) : fallback;
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    if (!obj_.contains(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw ConfigError(path_ + "." + key + ": expected an integer seed");
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(path_ + "." + key + ": expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return obj_.contains(key) ? text(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(path_ + "." + key + ": expected an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) throw ConfigError(path_ + "." + key + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    return obj_.contains(key) ? numbers(key) : std::move(fallback);
  }

  void finish() {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError(path_ + "." + it.key() + ": unknown key");
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

energy::FlowLimits parse_limits(Node node) {
  energy::FlowLimits limits;
  limits.wind_to_demand = node.number("wind_to_demand", energy::kUnlimited);
  limits.wind_to_battery = node.number("wind_to_battery", energy::kUnlimited);
  limits.grid_to_demand = node.number("grid_to_demand", energy::kUnlimited);
  limits.grid_to_battery = node.number("grid_to_battery", energy::kUnlimited);
  limits.battery_to_demand = node.number("battery_to_demand", energy::kUnlimited);
  node.finish();
  return limits;
}

energy::EnergyConfig parse_energy(Node node) {
  energy::EnergyConfig c;
  c.battery_capacity = node.number("battery_capacity");
  c.initial_battery = node.number("initial_battery", 0.0);
  if (node.has("limits")) c.limits = parse_limits(node.child("limits"));
  c.demand_profile.values = node.numbers("demand_profile");
  c.wind_profile.values = node.numbers("wind_profile");
  c.price_profile.values = node.numbers("price_profile");
  c.sigma_demand = node.number("sigma_demand", 0.0);
  c.sigma_wind = node.number("sigma_wind", 0.0);
  c.sigma_price = node.number("sigma_price", 0.0);
  c.price_reversion = node.number("price_reversion", 0.0);
  if (node.has("price_floor")) c.price_floor = node.number("price_floor");
  c.horizon = node.integer("horizon");
  c.lookahead = node.integer("lookahead");
  c.theta_lo = node.number("theta_lo", 0.0);
  c.theta_hi = node.number("theta_hi", 2.0);
  node.finish();
  return c;
}

tuner::TuneSchedule parse_schedule(Node node) {
  tuner::TuneSchedule s;
  s.a = node.number("a", s.a);
  s.big_a = node.number("big_a", s.big_a);
  s.alpha = node.number("alpha", s.alpha);
  s.c = node.number("c", s.c);
  s.gamma = node.number("gamma", s.gamma);
  s.iterations = node.integer("iterations", s.iterations);
  s.batch_paths = node.integer("batch_paths", s.batch_paths);
  s.validation_paths = node.integer("validation_paths", s.validation_paths);
  s.lo = node.number("lo", s.lo);
  s.hi = node.number("hi", s.hi);
  s.smoothing_window = node.integer("smoothing_window", s.smoothing_window);
  s.validation_candidates = node.integer("validation_candidates", s.validation_candidates);
  node.finish();
  return s;
}

BanditExperiment parse_bandit(Node node) {
  BanditExperiment b;
  b.testbed.true_means = node.numbers("true_means");
  b.testbed.noise_sigma = node.number("noise_sigma", 1.0);
  b.testbed.horizon = node.integer("horizon", 100);
  b.theta_grid = node.numbers("theta_grid");
  b.n_seeds = node.integer("n_seeds", 200);
  node.finish();
  return b;
}

SpathExperiment parse_spath(Node node) {
  SpathExperiment s;
  const json& links = node.raw("links");
  if (!links.is_array()) throw ConfigError("spath.links: expected an array");
  for (const json& row : links) {
    if (!row.is_array() || row.size() != 4)
      throw ConfigError("spath.links: each link is [from, to, mean, std]");
    cfa::spath::Link l;
    l.from = row[0].get<int>();
    l.to = row[1].get<int>();
    l.mean = row[2].get<double>();
    l.stdev = row[3].get<double>();
    s.graph.num_nodes = std::max({s.graph.num_nodes, l.from + 1, l.to + 1});
    s.graph.links.push_back(l);
  }
  s.graph.destination = node.integer("destination", s.graph.num_nodes - 1);
  s.origin = node.integer("origin", 0);
  s.options.horizon = node.integer("max_steps", s.options.horizon);
  s.options.estimate_sigma = node.number("estimate_sigma", 0.0);
  s.options.incomplete_penalty = node.number("incomplete_penalty", s.options.incomplete_penalty);
  s.options.deadline = node.number("deadline", 0.0);
  s.options.late_penalty_rate = node.number("late_penalty_rate", 0.0);
  s.theta_grid = node.numbers("theta_grid");
  s.n_seeds = node.integer("n_seeds", 200);
  node.finish();
  return s;
}

ThetaMode parse_theta_mode(const std::string& name) {
  if (name == "tied") return ThetaMode::Tied;
  if (name == "wind_only") return ThetaMode::WindOnly;
  if (name == "full") return ThetaMode::Full;
  throw ConfigError("theta_mode: expected tied, wind_only, or full, got \"" + name + "\"");
}

json limits_to_json(const energy::FlowLimits& l) {
  json out = json::object();
  if (std::isfinite(l.wind_to_demand)) out["wind_to_demand"] = l.wind_to_demand;
  if (std::isfinite(l.wind_to_battery)) out["wind_to_battery"] = l.wind_to_battery;
  if (std::isfinite(l.grid_to_demand)) out["grid_to_demand"] = l.grid_to_demand;
  if (std::isfinite(l.grid_to_battery)) out["grid_to_battery"] = l.grid_to_battery;
  if (std::isfinite(l.battery_to_demand)) out["battery_to_demand"] = l.battery_to_demand;
  return out;
}

}  // namespace

std::string theta_mode_name(ThetaMode mode) {
  switch (mode) {
    case ThetaMode::Tied: return "tied";
    case ThetaMode::WindOnly: return "wind_only";
    case ThetaMode::Full: return "full";
  }
  return "tied";
}

int theta_dimension(ThetaMode mode, int lookahead) {
  switch (mode) {
    case ThetaMode::Tied: return 1;
    case ThetaMode::WindOnly: return 1;
    case ThetaMode::Full: return 2 * lookahead;
  }
  return 1;
}

lookahead::ThetaVector expand_theta(ThetaMode mode, int lookahead,
                                    const std::vector<double>& theta) {
  const int dim = theta_dimension(mode, lookahead);
  if (static_cast<int>(theta.size()) != dim)
    throw std::invalid_argument("theta has " + std::to_string(theta.size()) +
                                " components, mode needs " + std::to_string(dim));
  switch (mode) {
    case ThetaMode::Tied:
      return cfa::lookahead::ThetaVector::tied(theta[0], lookahead);
    case ThetaMode::WindOnly: {
      cfa::lookahead::ThetaVector v = cfa::lookahead::ThetaVector::ones(lookahead);
      std::fill(v.wind.begin(), v.wind.end(), theta[0]);
      return v;
    }
    case ThetaMode::Full: {
      cfa::lookahead::ThetaVector v;
      v.demand.assign(theta.begin(), theta.begin() + lookahead);
      v.wind.assign(theta.begin() + lookahead, theta.end());
      return v;
    }
  }
  return cfa::lookahead::ThetaVector::ones(lookahead);
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root_json;
  try {
    root_json = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Node root(root_json, "config");

  ExperimentConfig c;
  c.problem = root.text("problem");
  if (c.problem != "energy" && c.problem != "bandit" && c.problem != "shortest-path")
    throw ConfigError("config.problem: expected energy, bandit, or shortest-path, got \"" +
                      c.problem + "\"");
  c.seed = root.seed("seed", 1);
  c.output_dir = root.text("output_dir", "out");

  if (c.problem == "energy") {
    c.energy = parse_energy(root.child("energy"));
    c.theta_mode = root.has("theta_mode") ? parse_theta_mode(root.text("theta_mode"))
                                          : ThetaMode::Tied;
    const int dim = theta_dimension(c.theta_mode, c.energy.lookahead);
    c.theta0 = root.numbers("theta0", std::vector<double>(dim, 1.0));
    if (root.has("tuner")) c.schedule = parse_schedule(root.child("tuner"));
    c.eval_paths = root.integer("eval_paths", 200);
    c.simulate_paths = root.integer("simulate_paths", 1);
  } else if (c.problem == "bandit") {
    c.bandit = parse_bandit(root.child("bandit"));
  } else {
    c.spath = parse_spath(root.child("shortest_path"));
  }
  root.finish();
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_json_text(const ExperimentConfig& c) {
  json root;
  root["problem"] = c.problem;
  root["seed"] = c.seed;
  root["output_dir"] = c.output_dir;
  if (c.problem == "energy") {
    json e;
    e["battery_capacity"] = c.energy.battery_capacity;
    e["initial_battery"] = c.energy.initial_battery;
    json limits = limits_to_json(c.energy.limits);
    if (!limits.empty()) e["limits"] = limits;
    e["demand_profile"] = c.energy.demand_profile.values;
    e["wind_profile"] = c.energy.wind_profile.values;
    e["price_profile"] = c.energy.price_profile.values;
    e["sigma_demand"] = c.energy.sigma_demand;
    e["sigma_wind"] = c.energy.sigma_wind;
    e["sigma_price"] = c.energy.sigma_price;
    e["price_reversion"] = c.energy.price_reversion;
    if (c.energy.price_floor) e["price_floor"] = *c.energy.price_floor;
    e["horizon"] = c.energy.horizon;
    e["lookahead"] = c.energy.lookahead;
    e["theta_lo"] = c.energy.theta_lo;
    e["theta_hi"] = c.energy.theta_hi;
    root["energy"] = e;
    root["theta_mode"] = theta_mode_name(c.theta_mode);
    root["theta0"] = c.theta0;
    json t;
    t["a"] = c.schedule.a;
    t["big_a"] = c.schedule.big_a;
    t["alpha"] = c.schedule.alpha;
    t["c"] = c.schedule.c;
    t["gamma"] = c.schedule.gamma;
    t["iterations"] = c.schedule.iterations;
    t["batch_paths"] = c.schedule.batch_paths;
    t["validation_paths"] = c.schedule.validation_paths;
    t["lo"] = c.schedule.lo;
    t["hi"] = c.schedule.hi;
    t["smoothing_window"] = c.schedule.smoothing_window;
    t["validation_candidates"] = c.schedule.validation_candidates;
    root["tuner"] = t;
    root["eval_paths"] = c.eval_paths;
    root["simulate_paths"] = c.simulate_paths;
  } else if (c.problem == "bandit") {
    json b;
    b["true_means"] = c.bandit.testbed.true_means;
    b["noise_sigma"] = c.bandit.testbed.noise_sigma;
    b["horizon"] = c.bandit.testbed.horizon;
    b["theta_grid"] = c.bandit.theta_grid;
    b["n_seeds"] = c.bandit.n_seeds;
    root["bandit"] = b;
  } else {
    json s;
    json links = json::array();
    for (const auto& l : c.spath.graph.links)
      links.push_back({l.from, l.to, l.mean, l.stdev});
    s["links"] = links;
    s["destination"] = c.spath.graph.destination;
    s["origin"] = c.spath.origin;
    s["max_steps"] = c.spath.options.horizon;
    s["estimate_sigma"] = c.spath.options.estimate_sigma;
    s["incomplete_penalty"] = c.spath.options.incomplete_penalty;
    s["deadline"] = c.spath.options.deadline;
    s["late_penalty_rate"] = c.spath.options.late_penalty_rate;
    s["theta_grid"] = c.spath.theta_grid;
    s["n_seeds"] = c.spath.n_seeds;
    root["shortest_path"] = s;
  }
  return root.dump(2);
}

void validate(const ExperimentConfig& c) {
  if (c.problem == "energy") {
    try {
      energy::validate_config(c.energy);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config.energy: ") + e.what());
    }
    const int dim = theta_dimension(c.theta_mode, c.energy.lookahead);
    if (static_cast<int>(c.theta0.size()) != dim)
      throw ConfigError("config.theta0: expected " + std::to_string(dim) +
                        " components for mode " + theta_mode_name(c.theta_mode) +
                        ", got " + std::to_string(c.theta0.size()));
    for (double v : c.theta0)
      if (v < c.energy.theta_lo || v > c.energy.theta_hi)
        throw ConfigError("config.theta0: component outside [theta_lo, theta_hi]");
    if (c.schedule.iterations < 0) throw ConfigError("config.tuner.iterations: negative");
    if (c.schedule.batch_paths < 1) throw ConfigError("config.tuner.batch_paths: must be >= 1");
    if (c.eval_paths < 1) throw ConfigError("config.eval_paths: must be >= 1");
    if (c.simulate_paths < 1) throw ConfigError("config.simulate_paths: must be >= 1");
  } else if (c.problem == "bandit") {
    if (c.bandit.testbed.true_means.empty())
      throw ConfigError("config.bandit.true_means: empty");
    if (c.bandit.testbed.horizon < 2 * static_cast<int>(c.bandit.testbed.true_means.size()))
      throw ConfigError("config.bandit.horizon: shorter than two round-robin sweeps");
    if (c.bandit.theta_grid.empty()) throw ConfigError("config.bandit.theta_grid: empty");
    if (c.bandit.n_seeds < 1) throw ConfigError("config.bandit.n_seeds: must be >= 1");
  } else {
    if (c.spath.graph.links.empty()) throw ConfigError("config.shortest_path.links: empty");
    if (c.spath.theta_grid.empty()) throw ConfigError("config.shortest_path.theta_grid: empty");
    for (double t : c.spath.theta_grid)
      if (t <= 0.0 || t >= 1.0)
        throw ConfigError("config.shortest_path.theta_grid: entries must be in (0, 1)");
    if (c.spath.n_seeds < 1) throw ConfigError("config.shortest_path.n_seeds: must be >= 1");
  }
}

ExperimentConfig default_energy_benchmark() {
  ExperimentConfig c;
  c.problem = "energy";
  c.seed = 20240601;
  c.output_dir = "out";

  // A wind-rich site: average wind is well above demand, the battery charges
  // from wind only, and grid purchases happen mostly during multi-hour wind
  // lulls.  Trusting raw wind forecasts (theta = 1) runs the battery lean and
  // pays for the lulls; the tuned policy discounts distant wind and keeps a
  // larger buffer.
  energy::EnergyConfig& e = c.energy;
  e.battery_capacity = 160.0;
  e.initial_battery = 80.0;
  e.limits.grid_to_demand = 200.0;
  e.limits.grid_to_battery = 0.0;
  e.limits.wind_to_battery = 40.0;
  e.limits.battery_to_demand = 40.0;
  // Diurnal demand, low at night with morning and evening peaks (MWh).
  e.demand_profile.values = {16, 15, 14, 14, 14, 15, 18, 22, 26, 27, 26, 25,
                             24, 24, 25, 26, 29, 32, 34, 33, 30, 26, 21, 18};
  // Installed wind at 2.4x demand, same diurnal shape.
  for (double d : e.demand_profile.values)
    e.wind_profile.values.push_back(2.4 * d);
  // Mildly diurnal price ($/MWh) with a mean-reverting walk on top.
  e.price_profile.values = {36, 34, 33, 32, 32, 34, 38, 42, 45, 46, 45, 44,
                            43, 43, 44, 45, 47, 50, 52, 51, 48, 44, 40, 38};
  e.sigma_demand = 2.31;  // 0.1 of mean profile demand
  e.sigma_wind = 22.16;   // 0.4 of mean profile wind
  e.sigma_price = 3.0;
  e.price_reversion = 0.1;
  e.price_floor = 0.0;
  e.horizon = 168;
  e.lookahead = 24;
  e.theta_lo = 0.0;
  e.theta_hi = 2.0;

  c.theta_mode = ThetaMode::WindOnly;
  c.theta0 = {1.0};
  c.schedule.iterations = 40;
  c.schedule.batch_paths = 16;
  c.schedule.validation_paths = 200;
  c.schedule.validation_candidates = 3;
  // Step size calibrated to the benchmark's objective scale (gradients near
  // theta = 1 are a few hundred dollars per unit theta).
  c.schedule.a = 5e-4;
  c.schedule.c = 0.1;
  c.eval_paths = 200;
  c.simulate_paths = 1;
  return c;
}

}  // namespace cfa::config
