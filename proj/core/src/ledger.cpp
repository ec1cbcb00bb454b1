#include "cnc/ledger.hpp"

#include <map>

#include "cnc/errors.hpp"

namespace cnc {

ResourceLedger::ResourceLedger(const Topology& t, const InstanceCatalog& catalog)
    : link_load_(t.links.size(), 0),
      node_load_(t.nodes.size(), 0),
      instance_load_(catalog.count(), 0) {}

void ResourceLedger::reset() {
  std::fill(link_load_.begin(), link_load_.end(), 0);
  std::fill(node_load_.begin(), node_load_.end(), 0);
  std::fill(instance_load_.begin(), instance_load_.end(), 0);
  applied_.clear();
}

long long ResourceLedger::link_residual(const Topology& t, LinkId id) const {
  return static_cast<long long>(t.links.at(id).bandwidth) - link_load_.at(id);
}

long long ResourceLedger::node_residual(const Topology& t, NodeId id) const {
  return static_cast<long long>(t.nodes.at(id).capacity) - node_load_.at(id);
}

long long ResourceLedger::instance_residual(const InstanceCatalog& c, InstanceId id) const {
  return static_cast<long long>(c.instance(id).capacity) - instance_load_.at(id);
}

bool ResourceLedger::apply(const Allocation& a, const Topology& t, const InstanceCatalog& catalog) {
  std::map<LinkId, int> traversals;
  for (std::size_t i = 0; i + 1 < a.hops.size(); ++i) {
    auto link = t.link_between(a.hops[i], a.hops[i + 1]);
    if (!link) return false;
    ++traversals[*link];
  }
  std::map<NodeId, int> stage_visits;
  for (NodeId host : a.hosts) ++stage_visits[host];

  for (const auto& [link, n] : traversals) {
    if (link_load_[link] + static_cast<long long>(a.bandwidth_req) * n >
        static_cast<long long>(t.links[link].bandwidth)) {
      return false;
    }
  }
  for (const auto& [node, n] : stage_visits) {
    if (node_load_[node] + static_cast<long long>(a.capacity_req) * n >
        static_cast<long long>(t.nodes[node].capacity)) {
      return false;
    }
  }
  for (InstanceId inst : a.instances) {
    if (instance_load_[inst] + a.capacity_req > catalog.instance(inst).capacity) return false;
  }

  for (const auto& [link, n] : traversals) {
    link_load_[link] += static_cast<long long>(a.bandwidth_req) * n;
  }
  for (const auto& [node, n] : stage_visits) {
    node_load_[node] += static_cast<long long>(a.capacity_req) * n;
  }
  for (InstanceId inst : a.instances) instance_load_[inst] += a.capacity_req;
  applied_.push_back(a);
  return true;
}

}  // namespace cnc
