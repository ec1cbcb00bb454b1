#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace cnc {

using DeviceId = std::uint32_t;
using NodeId = std::uint32_t;
using LinkId = std::uint32_t;

constexpr std::uint32_t kInvalidId = std::numeric_limits<std::uint32_t>::max();

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
};

enum class EnergyTier { High, Moderate, Low };

// Energy bands keyed to the 1-based device ordinal, i.e. the system size at
// which the device was introduced: growing a graph past `high_upto` devices
// starts drawing moderate rates, past `moderate_upto` low rates.
struct TierPlan {
  std::uint32_t high_upto = 13;
  std::uint32_t moderate_upto = 17;
  IntRange high{16, 20};
  IntRange moderate{13, 16};
  IntRange low{10, 13};

  EnergyTier tier_of(std::uint32_t ordinal) const {
    if (ordinal <= high_upto) return EnergyTier::High;
    if (ordinal <= moderate_upto) return EnergyTier::Moderate;
    return EnergyTier::Low;
  }
  const IntRange& band_of(std::uint32_t ordinal) const {
    switch (tier_of(ordinal)) {
      case EnergyTier::High: return high;
      case EnergyTier::Moderate: return moderate;
      default: return low;
    }
  }
};

struct NetworkDevice {
  DeviceId id = 0;
  std::uint32_t ports = 1;
  double energy_per_unit = 0.0;  // per mbps forwarded
  bool is_poa = false;
};

struct ComputingNode {
  NodeId id = 0;
  double capacity = 0.0;  // mbps-equivalent compute units
  double energy_per_unit = 0.0;
  DeviceId attached_device = 0;
};

struct Link {
  LinkId id = 0;
  DeviceId a = 0;
  DeviceId b = 0;
  double bandwidth = 0.0;
  double latency_ms = 0.0;
  double energy_per_unit = 0.0;
};

struct TopologyParams {
  std::uint32_t ports_per_device = 4;
  double poa_fraction = 0.25;  // lowest-index fraction of devices, min 1
  IntRange capacity{250, 300};  // link bandwidth and node capacity
  RealRange link_latency{0.1, 0.5};
  std::uint32_t links_lo_factor = 3;  // link count ~ U{lo*V, hi*V}, clamped
  std::uint32_t links_hi_factor = 5;
  TierPlan tiers;
};

class Topology {
 public:
  std::vector<NetworkDevice> devices;
  std::vector<ComputingNode> nodes;  // exactly one per device
  std::vector<Link> links;

  std::uint32_t size() const { return static_cast<std::uint32_t>(devices.size()); }

  // (neighbor device, connecting link) pairs, sorted by neighbor id.
  const std::vector<std::pair<DeviceId, LinkId>>& neighbors(DeviceId d) const;
  std::optional<LinkId> link_between(DeviceId a, DeviceId b) const;
  std::vector<DeviceId> poas() const;
  NodeId node_at(DeviceId d) const { return d; }  // node i attaches to device i

  void rebuild_adjacency();

 private:
  std::vector<std::vector<std::pair<DeviceId, LinkId>>> adjacency_;
};

enum class PathMetric { Latency, Hops };

// Loopless device sequence [a, ..., b]; empty when a == b.
struct Path {
  std::vector<DeviceId> devices;
  double latency_ms = 0.0;
};

Topology generate_topology(std::uint32_t size, const TopologyParams& params, std::uint64_t seed);

// Appends devices/links; never touches existing attributes. New links only
// connect pairs involving at least one new device.
Topology grow_topology(const Topology& base, std::uint32_t new_size, const TopologyParams& params,
                       std::uint64_t seed);

// Minimal-metric loopless path; equal-cost ties resolved towards the
// lexicographically smallest device sequence.
Path shortest_path(const Topology& t, DeviceId a, DeviceId b, PathMetric metric);

// Full single-source label set under the same tie-break. path[v] is empty
// for unreachable v; path[src] = {src}.
struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<std::vector<DeviceId>> path;
};
ShortestPathTree shortest_path_tree(const Topology& t, DeviceId src, PathMetric metric);

void save_topology(const Topology& t, std::ostream& out);
Topology load_topology(std::istream& in);

}  // namespace cnc
