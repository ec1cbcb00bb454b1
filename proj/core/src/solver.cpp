#include <algorithm>
#include <map>

#include "cnc/errors.hpp"
#include "cnc/placement.hpp"
#include "cnc/routing.hpp"

namespace cnc {

namespace {

// One admissible (replica, path) option of a request, with its resource
// footprint precomputed for cheap apply/revert during the search.
struct Option {
  PathCandidate candidate;
  std::vector<std::pair<LinkId, long long>> link_use;
  std::vector<std::pair<NodeId, long long>> node_use;
  std::vector<InstanceId> instance_use;
  long long energy_units = 0;
};

struct SearchContext {
  const Topology& t;
  const InstanceCatalog& catalog;
  const std::vector<Request>& requests;
  const PlacementObjective& objective;
  const SolveLimits& limits;
  const RoutingParams& routing;
  const Placement* previous;

  std::vector<InstanceId> instance_order;
  long long all_profit = 0;

  long long incumbent = std::numeric_limits<long long>::min();
  Placement best_placement;
  std::vector<std::optional<PathCandidate>> best_assignment;
  long long best_profit = 0;
  long long best_energy = 0;
  long long best_transition = 0;
  SolveStats stats;
};

struct Scratch {
  std::vector<long long> link_load;
  std::vector<long long> node_load;
  std::vector<long long> instance_load;
};

void assign_recurse(SearchContext& ctx, const Placement& placement,
                    const std::vector<std::vector<Option>>& options,
                    const std::vector<long long>& optimistic_suffix, std::size_t i,
                    long long value, long long profit, long long energy, long long transition,
                    Scratch& s, std::vector<std::optional<PathCandidate>>& chosen) {
  if (++ctx.stats.assignment_nodes > ctx.limits.max_nodes) {
    throw tractability_error("solve_exact: node budget exceeded (" +
                             std::to_string(ctx.limits.max_nodes) + ")");
  }
  const long long den = ctx.objective.lambda.den;
  if (i == ctx.requests.size()) {
    if (value > ctx.incumbent) {
      ctx.incumbent = value;
      ctx.best_placement = placement;
      ctx.best_assignment = chosen;
      ctx.best_profit = profit;
      ctx.best_energy = energy + transition;
      ctx.best_transition = transition;
    }
    return;
  }
  if (value + den * optimistic_suffix[i] <= ctx.incumbent) {
    ++ctx.stats.prunes;
    return;
  }

  const Request& r = ctx.requests[i];
  for (const Option& o : options[i]) {
    // Dynamic feasibility against current scratch loads.
    bool ok = true;
    for (const auto& [link, use] : o.link_use) {
      if (s.link_load[link] + use > static_cast<long long>(ctx.t.links[link].bandwidth)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      for (const auto& [node, use] : o.node_use) {
        if (s.node_load[node] + use > static_cast<long long>(ctx.t.nodes[node].capacity)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      for (InstanceId inst : o.instance_use) {
        if (s.instance_load[inst] + r.capacity_req > ctx.catalog.instance(inst).capacity) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;

    for (const auto& [link, use] : o.link_use) s.link_load[link] += use;
    for (const auto& [node, use] : o.node_use) s.node_load[node] += use;
    for (InstanceId inst : o.instance_use) s.instance_load[inst] += r.capacity_req;
    chosen[i] = o.candidate;

    assign_recurse(ctx, placement, options, optimistic_suffix, i + 1,
                   value + den * r.profit - ctx.objective.lambda.num * o.energy_units,
                   profit + r.profit, energy + o.energy_units, transition, s, chosen);

    chosen[i] = std::nullopt;
    for (const auto& [link, use] : o.link_use) s.link_load[link] -= use;
    for (const auto& [node, use] : o.node_use) s.node_load[node] -= use;
    for (InstanceId inst : o.instance_use) s.instance_load[inst] -= r.capacity_req;
  }

  // Reject branch.
  assign_recurse(ctx, placement, options, optimistic_suffix, i + 1, value, profit, energy,
                 transition, s, chosen);
}

void evaluate_placement(SearchContext& ctx, const Placement& placement) {
  ++ctx.stats.placements_explored;
  if (ctx.stats.placements_explored > ctx.limits.max_placements) {
    throw tractability_error("solve_exact: placement budget exceeded (" +
                             std::to_string(ctx.limits.max_placements) + ")");
  }

  long long transition = 0;
  if (ctx.objective.include_transition && ctx.previous != nullptr) {
    transition = transition_cost(*ctx.previous, placement, ctx.catalog);
  }
  const long long den = ctx.objective.lambda.den;
  const long long num = ctx.objective.lambda.num;
  if (den * ctx.all_profit - num * transition <= ctx.incumbent) {
    ++ctx.stats.prunes;
    return;
  }

  // Candidate actions, shared across requests with the same (PoA, service).
  std::map<std::pair<DeviceId, ServiceId>, std::vector<PathCandidate>> cache;
  std::vector<std::vector<Option>> options(ctx.requests.size());
  std::vector<long long> optimistic(ctx.requests.size() + 1, 0);
  for (std::size_t i = 0; i < ctx.requests.size(); ++i) {
    const Request& r = ctx.requests[i];
    auto key = std::make_pair(r.user, r.service);
    auto it = cache.find(key);
    if (it == cache.end()) {
      it = cache.emplace(key, enumerate_service_paths(ctx.t, r.user, ctx.catalog, placement,
                                                      r.service, ctx.routing))
               .first;
    }
    for (const PathCandidate& c : it->second) {
      if (c.latency_ms > r.latency_budget_ms) continue;
      Option o;
      o.candidate = c;
      std::map<LinkId, long long> links;
      for (std::size_t h = 0; h + 1 < c.hops.size(); ++h) {
        links[*ctx.t.link_between(c.hops[h], c.hops[h + 1])] += r.bandwidth_req;
      }
      o.link_use.assign(links.begin(), links.end());
      std::map<NodeId, long long> nodes;
      for (NodeId host : c.hosts) nodes[host] += r.capacity_req;
      o.node_use.assign(nodes.begin(), nodes.end());
      o.instance_use = c.instances;
      o.energy_units = link_energy_units(ctx.t, c.hops, r.bandwidth_req) +
                       compute_energy_units(ctx.t, c.hosts, r.capacity_req);
      options[i].push_back(std::move(o));
    }
  }
  for (std::size_t i = ctx.requests.size(); i > 0; --i) {
    optimistic[i - 1] = optimistic[i] + (options[i - 1].empty() ? 0 : ctx.requests[i - 1].profit);
  }

  Scratch s{std::vector<long long>(ctx.t.links.size(), 0),
            std::vector<long long>(ctx.t.nodes.size(), 0),
            std::vector<long long>(ctx.catalog.count(), 0)};
  std::vector<std::optional<PathCandidate>> chosen(ctx.requests.size());
  assign_recurse(ctx, placement, options, optimistic, 0, -num * transition, 0, 0, transition, s,
                 chosen);
}

void place_recurse(SearchContext& ctx, Placement& placement, std::size_t idx) {
  if (idx == ctx.instance_order.size()) {
    evaluate_placement(ctx, placement);
    return;
  }
  const InstanceId inst = ctx.instance_order[idx];
  for (const auto& node : ctx.t.nodes) {
    if (!fits(placement, inst, node.id, ctx.t, ctx.catalog)) continue;
    placement.bindings[inst] = node.id;
    place_recurse(ctx, placement, idx + 1);
    placement.bindings.erase(inst);
  }
}

}  // namespace

RationalWeight RationalWeight::parse(const std::string& text) {
  if (text.empty()) throw config_error("empty weight");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  long long num = 0;
  long long den = 1;
  bool after_point = false;
  bool any_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '.') {
      if (after_point) throw config_error("bad weight '" + text + "'");
      after_point = true;
      continue;
    }
    if (c < '0' || c > '9') throw config_error("bad weight '" + text + "'");
    if (num > (std::numeric_limits<long long>::max() - 9) / 10 ||
        (after_point && den > std::numeric_limits<long long>::max() / 10)) {
      throw config_error("weight '" + text + "' has too many digits");
    }
    num = num * 10 + (c - '0');
    if (after_point) den *= 10;
    any_digit = true;
  }
  if (!any_digit) throw config_error("bad weight '" + text + "'");
  if (negative) num = -num;
  return {num, den};
}

SolveResult solve_exact(const Topology& t, const InstanceCatalog& catalog,
                        const std::vector<Request>& requests, const PlacementObjective& objective,
                        const SolveLimits& limits, const RoutingParams& routing,
                        const Placement* previous) {
  if (requests.size() > limits.max_requests) {
    throw tractability_error("solve_exact: " + std::to_string(requests.size()) +
                             " requests exceed limit " + std::to_string(limits.max_requests));
  }
  // Upper bound on placement leaves: nodes^instances.
  double estimate = 1.0;
  for (std::size_t i = 0; i < catalog.count(); ++i) estimate *= static_cast<double>(t.nodes.size());
  if (estimate > static_cast<double>(limits.max_placements)) {
    throw tractability_error("solve_exact: ~" + std::to_string(estimate) +
                             " placements exceed limit " + std::to_string(limits.max_placements));
  }
  if (objective.lambda.num < 0 || objective.lambda.den <= 0) {
    throw config_error("solve_exact: energy weight must be >= 0");
  }

  SearchContext ctx{t, catalog, requests, objective, limits, routing, previous};
  for (const auto& inst : catalog.all()) ctx.instance_order.push_back(inst.id);
  for (const auto& r : requests) ctx.all_profit += r.profit;
  ctx.best_assignment.assign(requests.size(), std::nullopt);

  Placement working;
  place_recurse(ctx, working, 0);
  if (ctx.incumbent == std::numeric_limits<long long>::min()) {
    throw placement_error("solve_exact: no feasible instance placement exists");
  }

  SolveResult result;
  result.placement = ctx.best_placement;
  result.assignment = ctx.best_assignment;
  result.profit = ctx.best_profit;
  result.energy_units = ctx.best_energy;
  result.transition_units = ctx.best_transition;
  result.objective_scaled = ctx.incumbent;
  result.objective = static_cast<double>(ctx.incumbent) / static_cast<double>(objective.lambda.den);
  result.stats = ctx.stats;
  return result;
}

}  // namespace cnc
