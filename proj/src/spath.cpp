#include "cfa/spath.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "cfa/stats.hpp"

namespace cfa::spath {

StochasticGraph load_graph_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph CSV: " + path);
  StochasticGraph g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) throw std::runtime_error("bad graph CSV line: " + line);
    Link l;
    l.from = std::stoi(cells[0]);
    l.to = std::stoi(cells[1]);
    l.mean = std::stod(cells[2]);
    l.stdev = std::stod(cells[3]);
    if (l.stdev < 0.0) throw std::runtime_error("negative stdev in graph CSV");
    g.num_nodes = std::max({g.num_nodes, l.from + 1, l.to + 1});
    g.links.push_back(l);
  }
  g.destination = g.num_nodes - 1;
  return g;
}

PathResult percentile_shortest_path(const StochasticGraph& graph, double theta,
                                    int origin,
                                    const std::vector<double>& means) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("theta must be in (0, 1)");
  if (!means.empty() && means.size() != graph.links.size())
    throw std::invalid_argument("mean override length mismatch");
  const double z = stats::normal_quantile(theta);

  std::vector<std::vector<int>> out(graph.num_nodes);
  for (std::size_t i = 0; i < graph.links.size(); ++i)
    out[graph.links[i].from].push_back(static_cast<int>(i));

  auto link_cost = [&](int i) {
    double mean = means.empty() ? graph.links[i].mean : means[i];
    return std::max(0.0, mean + z * graph.links[i].stdev);
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(graph.num_nodes, inf);
  std::vector<int> via(graph.num_nodes, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[origin] = 0.0;
  heap.emplace(0.0, origin);
  while (!heap.empty()) {
    auto [d, node] = heap.top();
    heap.pop();
    if (d > dist[node]) continue;
    if (node == graph.destination) break;
    for (int li : out[node]) {
      double nd = d + link_cost(li);
      int to = graph.links[li].to;
      if (nd < dist[to]) {
        dist[to] = nd;
        via[to] = li;
        heap.emplace(nd, to);
      }
    }
  }
  if (dist[graph.destination] == inf)
    throw std::runtime_error("destination unreachable from node " +
                             std::to_string(origin));

  PathResult result;
  result.cost = dist[graph.destination];
  for (int node = graph.destination; node != origin;) {
    int li = via[node];
    result.link_indices.push_back(li);
    node = graph.links[li].from;
  }
  std::reverse(result.link_indices.begin(), result.link_indices.end());
  return result;
}

TripResult navigate_simulate(const StochasticGraph& graph, double theta,
                             int origin, const NavigateOptions& options,
                             std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> means(graph.links.size());
  for (std::size_t i = 0; i < graph.links.size(); ++i)
    means[i] = graph.links[i].mean;

  TripResult trip;
  int node = origin;
  while (node != graph.destination && trip.steps < options.horizon) {
    PathResult plan = percentile_shortest_path(graph, theta, node, means);
    int li = plan.link_indices.front();
    const Link& link = graph.links[li];
    double realized =
        std::max(0.0, rng.normal(means[li], link.stdev));
    trip.travel_cost += realized;
    ++trip.steps;
    node = link.to;
    if (options.estimate_sigma > 0.0)
      for (double& m : means)
        m = std::max(0.0, m + options.estimate_sigma * rng.normal());
  }
  trip.completed = node == graph.destination;
  if (!trip.completed) {
    trip.penalty += options.incomplete_penalty;
  } else if (options.deadline > 0.0 && trip.travel_cost > options.deadline) {
    trip.penalty += options.late_penalty_rate * (trip.travel_cost - options.deadline);
  }
  return trip;
}

}  // namespace cfa::spath
