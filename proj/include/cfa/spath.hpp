#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfa/rng.hpp"

namespace cfa::spath {

// Directed link with a normal travel-cost model; realized and percentile
// costs are floored at zero.
struct Link {
  int from = 0;
  int to = 0;
  double mean = 0.0;
  double stdev = 0.0;
};

struct StochasticGraph {
  int num_nodes = 0;
  std::vector<Link> links;
  int destination = 0;
};

// Edge-list CSV: "from,to,mean,std" per line, '#' comments allowed.  The
// destination is the largest node id unless set afterwards.
StochasticGraph load_graph_csv(const std::string& path);

struct PathResult {
  std::vector<int> link_indices;  // origin -> destination, in order
  double cost = 0.0;              // deterministic theta-percentile cost
};

// Shortest path under the theta-percentile deterministic costs
//   c(theta) = max(0, mean + z(theta) * stdev),
// via Dijkstra.  Requires 0 < theta < 1; throws if the destination is
// unreachable.  `means` overrides the graph's link means when non-empty
// (used while navigating with evolving estimates).
PathResult percentile_shortest_path(const StochasticGraph& graph, double theta,
                                    int origin,
                                    const std::vector<double>& means = {});

struct NavigateOptions {
  int horizon = 1000;             // max links traversed before giving up
  double estimate_sigma = 0.0;    // random-walk step of the mean estimates
  double incomplete_penalty = 1e6;
  double deadline = 0.0;          // 0 disables the lateness penalty
  double late_penalty_rate = 0.0; // cost per unit of time past the deadline
};

struct TripResult {
  double travel_cost = 0.0;
  double penalty = 0.0;
  bool completed = false;
  int steps = 0;
  double total() const { return travel_cost + penalty; }
};

// Roll forward: replan with the percentile path at every node, traverse one
// link, pay its realized cost, and let all mean estimates drift by an
// i.i.d. normal increment (clamped at zero).
TripResult navigate_simulate(const StochasticGraph& graph, double theta,
                             int origin, const NavigateOptions& options,
                             std::uint64_t seed);

}  // namespace cfa::spath
