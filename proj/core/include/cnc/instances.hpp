#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cnc/service.hpp"
#include "cnc/topology.hpp"

namespace cnc {

using InstanceId = std::uint32_t;

struct ServiceInstance {
  InstanceId id = 0;
  ServiceId service = 0;
  std::uint32_t stage = 0;
  std::uint32_t replica = 0;
  std::string label;
  int capacity = 20;         // mbps budget per instance
  int transition_rate = 0;   // energy per context change, drawn once
};

// Identities of all placeable instances. A replica is a whole-chain copy:
// replica r of a service owns one instance per chain stage, and a request is
// served end-to-end by a single replica.
class InstanceCatalog {
 public:
  InstanceCatalog() = default;
  InstanceCatalog(const ServiceRegistry& registry, std::uint32_t replicas, std::uint64_t seed);

  const std::vector<ServiceInstance>& all() const { return instances_; }
  const ServiceInstance& instance(InstanceId id) const { return instances_.at(id); }
  std::size_t count() const { return instances_.size(); }
  std::uint32_t replicas(ServiceId service) const;
  // Stage-ordered instance ids of one replica chain.
  const std::vector<InstanceId>& chain(ServiceId service, std::uint32_t replica) const;
  const std::vector<ServiceId>& services() const { return service_ids_; }

 private:
  std::vector<ServiceInstance> instances_;
  std::vector<ServiceId> service_ids_;
  std::map<std::pair<ServiceId, std::uint32_t>, std::vector<InstanceId>> chains_;
};

// Instance -> computing node map. Placement-time commitment on a node is the
// sum of hosted instance capacities and must stay within the node capacity.
struct Placement {
  std::map<InstanceId, NodeId> bindings;

  std::optional<NodeId> node_of(InstanceId id) const {
    auto it = bindings.find(id);
    if (it == bindings.end()) return std::nullopt;
    return it->second;
  }
  bool operator==(const Placement&) const = default;
};

int committed_capacity(const Placement& p, NodeId node, const InstanceCatalog& catalog);
bool fits(const Placement& p, InstanceId instance, NodeId node, const Topology& t,
          const InstanceCatalog& catalog);

// Sum of per-instance context-change rates over added, removed, or migrated
// bindings; unchanged bindings cost nothing.
long long transition_cost(const Placement& before, const Placement& after,
                          const InstanceCatalog& catalog);

void save_placement(const Placement& p, std::ostream& out);
Placement load_placement(std::istream& in);

}  // namespace cnc
