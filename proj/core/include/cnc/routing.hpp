#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cnc/instances.hpp"
#include "cnc/ledger.hpp"
#include "cnc/service.hpp"
#include "cnc/topology.hpp"

namespace cnc {

constexpr std::size_t kAllPaths = std::numeric_limits<std::size_t>::max();

struct RoutingParams {
  std::size_t k_paths = 3;            // candidates kept per (PoA, chain); kAllPaths = no limit
  double proc_latency_ms = 0.2;       // per chain stage
  bool include_return_leg = true;     // deliver results back to the PoA
};

// One PoA -> chain -> PoA routing option for a specific replica chain.
struct PathCandidate {
  ServiceId service = 0;
  std::uint32_t replica = 0;
  std::vector<InstanceId> instances;  // stage order
  std::vector<NodeId> hosts;          // stage order
  std::vector<DeviceId> hops;         // device sequence, loopless per leg
  double latency_ms = 0.0;            // link latencies + per-stage processing
  double min_residual_bw = 0.0;       // static min link bandwidth at enumeration
};

enum class SegmentMode { HopByHop, Waypoint };

// Source-routing stack; front() is the next segment to consume.
struct SegmentList {
  SegmentMode mode = SegmentMode::HopByHop;
  std::vector<DeviceId> segments;
};

struct FeasibilityVerdict {
  enum class Kind { Feasible, Bandwidth, NodeCapacity, InstanceBudget, Latency };
  Kind kind = Kind::Feasible;
  std::uint32_t element = kInvalidId;  // violating link/node/instance id
  bool ok() const { return kind == Kind::Feasible; }
};

std::string to_string(FeasibilityVerdict::Kind kind);

// Up to k loopless k-shortest paths a -> b by (latency, lexicographic) order.
std::vector<Path> k_shortest_paths(const Topology& t, DeviceId a, DeviceId b, std::size_t k);

// Candidates through the given chain hosts: per-leg k-shortest paths
// combined, sorted by (total latency, hop sequence), duplicates dropped,
// truncated to k.
std::vector<PathCandidate> enumerate_paths(const Topology& t, DeviceId poa,
                                           const std::vector<NodeId>& chain_hosts, std::size_t k,
                                           const RoutingParams& params);

// All replica-chain candidates of one service under a placement.
std::vector<PathCandidate> enumerate_service_paths(const Topology& t, DeviceId poa,
                                                   const InstanceCatalog& catalog,
                                                   const Placement& placement, ServiceId service,
                                                   const RoutingParams& params);

// First violated constraint in order: link bandwidth, node capacity,
// instance budget, latency.
FeasibilityVerdict check_feasibility(const PathCandidate& c, const Request& r,
                                     const ResourceLedger& usage, const Topology& t,
                                     const InstanceCatalog& catalog);

SegmentList encode_segments(const std::vector<DeviceId>& hops, SegmentMode mode, const Topology& t);
std::vector<DeviceId> simulate_forwarding(const Topology& t, const SegmentList& s, DeviceId origin);

// Textual SRv6-like notation: SL[a>b>c].
std::string format_segment_list(const SegmentList& s);

// Integer energy units for one request over one candidate.
long long link_energy_units(const Topology& t, const std::vector<DeviceId>& hops, int bandwidth_req);
long long compute_energy_units(const Topology& t, const std::vector<NodeId>& hosts, int capacity_req);

Allocation to_allocation(const PathCandidate& c, const Request& r);

}  // namespace cnc
