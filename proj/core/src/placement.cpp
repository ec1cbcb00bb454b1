#include "cnc/placement.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cnc/errors.hpp"
#include "cnc/rng.hpp"

namespace cnc {

InstanceCatalog::InstanceCatalog(const ServiceRegistry& registry, std::uint32_t replicas,
                                 std::uint64_t seed) {
  if (replicas == 0) throw config_error("replica count must be >= 1");
  InstanceId next = 0;
  for (const auto& svc : registry.services()) {
    service_ids_.push_back(svc.id);
    for (std::uint32_t r = 0; r < replicas; ++r) {
      std::vector<InstanceId> chain;
      for (std::uint32_t stage = 0; stage < svc.chain.size(); ++stage) {
        Rng rng(substream_seed(seed, "instance-rate", next));
        ServiceInstance inst;
        inst.id = next++;
        inst.service = svc.id;
        inst.stage = stage;
        inst.replica = r;
        inst.label = svc.chain[stage];
        inst.capacity = svc.instance_capacity;
        inst.transition_rate = static_cast<int>(rng.uniform_int(100, 200));
        chain.push_back(inst.id);
        instances_.push_back(std::move(inst));
      }
      chains_[{svc.id, r}] = std::move(chain);
    }
  }
}

std::uint32_t InstanceCatalog::replicas(ServiceId service) const {
  std::uint32_t n = 0;
  while (chains_.count({service, n}) > 0) ++n;
  return n;
}

const std::vector<InstanceId>& InstanceCatalog::chain(ServiceId service,
                                                      std::uint32_t replica) const {
  auto it = chains_.find({service, replica});
  if (it == chains_.end()) {
    throw placement_error("no replica " + std::to_string(replica) + " for service " +
                          std::to_string(service));
  }
  return it->second;
}

int committed_capacity(const Placement& p, NodeId node, const InstanceCatalog& catalog) {
  int total = 0;
  for (const auto& [inst, n] : p.bindings) {
    if (n == node) total += catalog.instance(inst).capacity;
  }
  return total;
}

bool fits(const Placement& p, InstanceId instance, NodeId node, const Topology& t,
          const InstanceCatalog& catalog) {
  const int need = catalog.instance(instance).capacity;
  return committed_capacity(p, node, catalog) + need <=
         static_cast<int>(t.nodes.at(node).capacity);
}

long long transition_cost(const Placement& before, const Placement& after,
                          const InstanceCatalog& catalog) {
  long long total = 0;
  for (const auto& [inst, node] : before.bindings) {
    auto now = after.node_of(inst);
    if (!now || *now != node) total += catalog.instance(inst).transition_rate;
  }
  for (const auto& [inst, node] : after.bindings) {
    if (!before.node_of(inst)) total += catalog.instance(inst).transition_rate;
  }
  return total;
}

void save_placement(const Placement& p, std::ostream& out) {
  out << "# cncsim-placement v1\n";
  for (const auto& [inst, node] : p.bindings) {
    out << inst << " " << node << "\n";
  }
}

Placement load_placement(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# cncsim-placement v1") {
    throw io_error("placement file: bad or missing header");
  }
  Placement p;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    InstanceId inst;
    NodeId node;
    ls >> inst >> node;
    if (!ls) throw io_error("placement file: malformed record '" + line + "'");
    if (p.bindings.count(inst) > 0) {
      throw io_error("placement file: instance " + std::to_string(inst) + " bound twice");
    }
    p.bindings[inst] = node;
  }
  return p;
}

Placement place_greedy(const Topology& t, const InstanceCatalog& catalog,
                       const std::vector<double>& demand_forecast, const PlacementObjective&) {
  // Service order: descending forecast demand, then id.
  std::vector<ServiceId> order = catalog.services();
  auto demand_of = [&](ServiceId s) {
    return s < demand_forecast.size() ? demand_forecast[s] : 0.0;
  };
  std::stable_sort(order.begin(), order.end(), [&](ServiceId a, ServiceId b) {
    return demand_of(a) > demand_of(b);
  });

  Placement p;
  for (ServiceId svc : order) {
    for (std::uint32_t r = 0; r < catalog.replicas(svc); ++r) {
      for (InstanceId inst : catalog.chain(svc, r)) {
        NodeId best = kInvalidId;
        for (const auto& node : t.nodes) {
          if (!fits(p, inst, node.id, t, catalog)) continue;
          if (best == kInvalidId || node.energy_per_unit < t.nodes[best].energy_per_unit) {
            best = node.id;
          }
        }
        if (best == kInvalidId) {
          throw placement_error("no node can host instance " + std::to_string(inst) + " (" +
                                catalog.instance(inst).label + ")");
        }
        p.bindings[inst] = best;
      }
    }
  }
  return p;
}

Placement place_random(const Topology& t, const InstanceCatalog& catalog, Rng& rng) {
  Placement p;
  for (const auto& inst : catalog.all()) {
    std::vector<NodeId> feasible;
    for (const auto& node : t.nodes) {
      if (fits(p, inst.id, node.id, t, catalog)) feasible.push_back(node.id);
    }
    if (feasible.empty()) {
      throw placement_error("no node can host instance " + std::to_string(inst.id));
    }
    p.bindings[inst.id] = rng.pick(feasible);
  }
  return p;
}

}  // namespace cnc
