#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cnc/instances.hpp"
#include "cnc/ledger.hpp"
#include "cnc/service.hpp"
#include "cnc/topology.hpp"

namespace cnc {

enum class OwnerKind { Device, Node };

struct Owner {
  OwnerKind kind = OwnerKind::Device;
  std::uint32_t id = 0;
  bool operator==(const Owner&) const = default;
  auto operator<=>(const Owner&) const = default;
};

// (user, service, request, port, metric) tensor dimensions.
struct StateDims {
  std::uint32_t users = 1;
  std::uint32_t services = 1;
  std::uint32_t requests = 1;
  std::uint32_t ports = 1;
  std::uint32_t metrics = 1;
  std::size_t cell_count() const {
    return static_cast<std::size_t>(users) * services * requests * ports * metrics;
  }
};

// Per-owner samples of one slot. Missing cells are zero-filled and
// distinguishable through the presence mask; last write within a slot wins.
class ShortTermResourceState {
 public:
  ShortTermResourceState() = default;
  ShortTermResourceState(Owner owner, Slot slot, StateDims dims);

  void record(std::uint32_t user, std::uint32_t service, std::uint32_t request, std::uint32_t port,
              std::span<const double> metrics);

  double at(std::uint32_t user, std::uint32_t service, std::uint32_t request, std::uint32_t port,
            std::uint32_t metric) const;
  bool present(std::uint32_t user, std::uint32_t service, std::uint32_t request,
               std::uint32_t port) const;
  std::size_t present_count() const;

  Owner owner() const { return owner_; }
  Slot slot() const { return slot_; }
  const StateDims& dims() const { return dims_; }

 private:
  std::size_t cell_index(std::uint32_t u, std::uint32_t s, std::uint32_t r, std::uint32_t p,
                         std::uint32_t m) const;
  Owner owner_;
  Slot slot_ = 0;
  StateDims dims_;
  std::vector<double> cells_;
  std::vector<bool> present_;
};

// Sliding stack of short-term states over [t - T_R, t], contiguous slots.
class LongTermResourceState {
 public:
  explicit LongTermResourceState(std::uint32_t window_length);
  void push(ShortTermResourceState state);
  bool complete() const { return states_.size() == window_length_; }
  bool empty() const { return states_.empty(); }
  std::uint32_t window_length() const { return window_length_; }
  const std::deque<ShortTermResourceState>& states() const { return states_; }

 private:
  std::uint32_t window_length_;
  std::deque<ShortTermResourceState> states_;
};

enum class Indicator { Mean, Max, Min, Last };

const std::vector<Indicator>& default_indicators();  // {Mean, Max, Last}
std::string indicator_name(Indicator i);
Indicator parse_indicator(const std::string& name);

// (service, port, indicator) tensor.
struct ReducedResourceState {
  Owner owner;
  Slot slot = 0;
  std::uint32_t services = 0;
  std::uint32_t ports = 0;
  std::vector<Indicator> indicators;
  std::vector<double> values;
  double at(std::uint32_t s, std::uint32_t p, std::uint32_t i) const {
    return values[(static_cast<std::size_t>(s) * ports + p) * indicators.size() + i];
  }
};

// Window statistics per (service, port) over users, requests, slots, and
// metrics. The projector is deliberately deterministic; swap it out via
// ReductionProjector if an embedding model should replace it.
ReducedResourceState reduce_resource_state(const LongTermResourceState& window,
                                           const std::vector<Indicator>& indicator_set);

using ReductionProjector = ReducedResourceState (*)(const LongTermResourceState&,
                                                    const std::vector<Indicator>&);

enum class DomainKind { Network, Computing };

// Short-term domain view: per-service metric vectors for the domain's
// node-like elements (devices / service instances) and its link-like
// elements (links / chain edges).
struct DomainState {
  DomainKind domain = DomainKind::Network;
  Slot slot = 0;
  std::uint32_t services = 0;
  std::uint32_t elements = 0;  // N: devices or instances
  std::uint32_t links = 0;     // L: links or chain edges
  std::uint32_t metrics = 0;   // M_D availability metrics + carried indicators
  std::vector<double> element_metrics;  // [service][element][metric]
  std::vector<double> link_metrics;     // [service][link][metric]

  double element_at(std::uint32_t s, std::uint32_t n, std::uint32_t m) const {
    return element_metrics[(static_cast<std::size_t>(s) * elements + n) * metrics + m];
  }
  double link_at(std::uint32_t s, std::uint32_t l, std::uint32_t m) const {
    return link_metrics[(static_cast<std::size_t>(s) * links + l) * metrics + m];
  }
};

// (service, element, link, indicator) tensor plus per-element and per-link
// marginals used for graph annotation.
struct ReducedDomainState {
  DomainKind domain = DomainKind::Network;
  Slot slot = 0;
  std::uint32_t services = 0;
  std::uint32_t elements = 0;
  std::uint32_t links = 0;
  std::vector<Indicator> indicators;
  std::vector<double> values;              // S x N x L x |indicators|
  std::vector<double> element_indicators;  // [element][indicator]
  std::vector<double> link_indicators;     // [link][indicator]

  double at(std::uint32_t s, std::uint32_t n, std::uint32_t l, std::uint32_t i) const {
    return values[(((static_cast<std::size_t>(s) * elements + n) * links) + l) * indicators.size() +
                  i];
  }
};

ReducedDomainState reduce_domain_state(std::span<const DomainState> window,
                                       const std::vector<Indicator>& indicator_set);

struct ElementAnnotation {
  std::vector<double> indicators;
  double load = 0.0;
  double capacity = 0.0;
};

struct PoaPathStat {
  DeviceId poa = 0;
  double min_latency_ms = 0.0;
};

struct ServiceBinding {
  ServiceId service = 0;
  std::vector<std::pair<InstanceId, NodeId>> instance_nodes;  // sorted by instance id
  std::vector<double> instance_loads;                         // aligned with instance_nodes
  std::vector<PoaPathStat> poa_paths;                         // best bound path per PoA
};

// Reduced, graph-shaped E2E state: the annotated topology plus the unified
// service -> (instance -> node, paths) binding.
struct SystemState {
  Slot slot = 0;
  std::vector<ElementAnnotation> devices;
  std::vector<ElementAnnotation> links;
  std::vector<ElementAnnotation> nodes;
  std::vector<ServiceBinding> bindings;
  std::optional<std::uint32_t> context;

  std::size_t element_count() const { return devices.size() + links.size() + nodes.size(); }
};

SystemState build_system_state(const ReducedDomainState& network, const ReducedDomainState& computing,
                               const Topology& t, const Placement& placement,
                               const InstanceCatalog& catalog);

// Fills per-element load/capacity and per-binding instance loads from the
// ledger snapshot.
void annotate_loads(SystemState& state, const Topology& t, const InstanceCatalog& catalog,
                    const ResourceLedger& ledger);

// Retains the last `capacity` system states, strictly oldest-first eviction.
class MemoryBank {
 public:
  explicit MemoryBank(std::size_t capacity);
  void push(SystemState state);
  const std::deque<SystemState>& states() const { return states_; }
  std::size_t capacity() const { return capacity_; }

  void dump(std::ostream& out) const;
  static MemoryBank load(std::istream& in);

 private:
  std::size_t capacity_;
  std::deque<SystemState> states_;
};

}  // namespace cnc
