#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cnc/instances.hpp"
#include "cnc/routing.hpp"
#include "cnc/service.hpp"
#include "cnc/topology.hpp"

namespace cnc {

class Rng;

// Energy weight as a decimal rational so the exact solver can compare
// objectives in scaled integer arithmetic: value = profit - (num/den)*energy.
struct RationalWeight {
  long long num = 1;
  long long den = 100;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  static RationalWeight parse(const std::string& text);
};

struct PlacementObjective {
  double profit_weight = 1.0;  // kept at 1.0; profit scales are Table-1 native
  RationalWeight lambda{1, 100};
  bool include_transition = true;
};

struct SolveLimits {
  std::uint64_t max_placements = 200000;       // placement leaves
  std::uint64_t max_nodes = 200000000;         // total search tree nodes
  std::size_t max_requests = 64;
};

struct SolveStats {
  std::uint64_t placements_explored = 0;
  std::uint64_t assignment_nodes = 0;
  std::uint64_t prunes = 0;
};

struct SolveResult {
  Placement placement;
  // Per request (input order): chosen candidate, or nullopt when rejected.
  std::vector<std::optional<PathCandidate>> assignment;
  long long profit = 0;
  long long energy_units = 0;      // operational + transition
  long long transition_units = 0;
  long long objective_scaled = 0;  // den*profit - num*energy
  double objective = 0.0;
  SolveStats stats;
};

// Certified-optimal joint instance placement + request assignment under
// capacity, bandwidth, latency and chaining constraints. Branch and bound
// over placements and per-request options; bound is served profit so far
// plus the optimistic profit of unassigned requests.
SolveResult solve_exact(const Topology& t, const InstanceCatalog& catalog,
                        const std::vector<Request>& requests, const PlacementObjective& objective,
                        const SolveLimits& limits, const RoutingParams& routing,
                        const Placement* previous = nullptr);

// Instances in descending forecast-demand order onto the feasible node with
// the lowest energy rate, ties by node id. demand_forecast is indexed by
// service id.
Placement place_greedy(const Topology& t, const InstanceCatalog& catalog,
                       const std::vector<double>& demand_forecast,
                       const PlacementObjective& objective);

// Uniformly random feasible node per instance.
Placement place_random(const Topology& t, const InstanceCatalog& catalog, Rng& rng);

}  // namespace cnc
