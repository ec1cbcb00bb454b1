#pragma once

#include <cstdint>
#include <vector>

#include "cnc/instances.hpp"
#include "cnc/service.hpp"
#include "cnc/topology.hpp"

namespace cnc {

// One admitted request: the replica chain it binds and the realized path.
struct Allocation {
  RequestId request = 0;
  ServiceId service = 0;
  std::uint32_t replica = 0;
  std::vector<InstanceId> instances;  // stage order
  std::vector<NodeId> hosts;          // stage order
  std::vector<DeviceId> hops;         // PoA ... PoA (return leg included)
  double latency_ms = 0.0;
  int capacity_req = 0;
  int bandwidth_req = 0;
  int profit = 0;
};

// Per-slot commitments. Integer mbps accounting so residual comparisons are
// exact. Commitments expire at slot end (reset()).
class ResourceLedger {
 public:
  ResourceLedger() = default;
  ResourceLedger(const Topology& t, const InstanceCatalog& catalog);

  void reset();

  long long link_load(LinkId id) const { return link_load_.at(id); }
  long long node_load(NodeId id) const { return node_load_.at(id); }
  long long instance_load(InstanceId id) const { return instance_load_.at(id); }

  long long link_residual(const Topology& t, LinkId id) const;
  long long node_residual(const Topology& t, NodeId id) const;
  long long instance_residual(const InstanceCatalog& c, InstanceId id) const;

  // All-or-nothing: re-verifies every constraint against current loads and
  // either commits the whole allocation or leaves the ledger untouched.
  bool apply(const Allocation& a, const Topology& t, const InstanceCatalog& catalog);

  const std::vector<Allocation>& applied() const { return applied_; }

 private:
  std::vector<long long> link_load_;
  std::vector<long long> node_load_;
  std::vector<long long> instance_load_;
  std::vector<Allocation> applied_;
};

}  // namespace cnc
