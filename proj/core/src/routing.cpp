#include "cnc/routing.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cnc/errors.hpp"

namespace cnc {

namespace {

// Latency-metric Dijkstra with node/edge bans, same (dist, lexicographic)
// tie-break as shortest_path_tree. Returns an empty path when unreachable.
Path dijkstra_banned(const Topology& t, DeviceId a, DeviceId b, const std::vector<bool>& banned_node,
                     const std::set<std::pair<DeviceId, DeviceId>>& banned_edge) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(t.size(), inf);
  std::vector<std::vector<DeviceId>> path(t.size());
  std::vector<bool> settled(t.size(), false);
  dist[a] = 0.0;
  path[a] = {a};

  for (;;) {
    DeviceId u = kInvalidId;
    for (DeviceId v = 0; v < t.size(); ++v) {
      if (settled[v] || dist[v] == inf) continue;
      if (u == kInvalidId || dist[v] < dist[u] || (dist[v] == dist[u] && path[v] < path[u])) u = v;
    }
    if (u == kInvalidId || u == b) break;
    settled[u] = true;
    for (const auto& [v, link] : t.neighbors(u)) {
      if (settled[v] || banned_node[v]) continue;
      if (banned_edge.count({std::min(u, v), std::max(u, v)}) > 0) continue;
      const double cand = dist[u] + t.links[link].latency_ms;
      if (cand < dist[v]) {
        dist[v] = cand;
        path[v] = path[u];
        path[v].push_back(v);
      } else if (cand == dist[v]) {
        auto c = path[u];
        c.push_back(v);
        if (c < path[v]) path[v] = std::move(c);
      }
    }
  }
  Path out;
  if (dist[b] != inf) {
    out.devices = path[b];
    out.latency_ms = dist[b];
  }
  return out;
}

double path_latency(const Topology& t, const std::vector<DeviceId>& devices) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < devices.size(); ++i) {
    total += t.links[*t.link_between(devices[i], devices[i + 1])].latency_ms;
  }
  return total;
}

struct PathOrder {
  bool operator()(const Path& x, const Path& y) const {
    if (x.latency_ms != y.latency_ms) return x.latency_ms < y.latency_ms;
    return x.devices < y.devices;
  }
};

}  // namespace

std::vector<Path> k_shortest_paths(const Topology& t, DeviceId a, DeviceId b, std::size_t k) {
  if (k == 0) return {};
  if (a == b) return {Path{}};  // the empty stay-in-place path

  std::vector<bool> no_ban(t.size(), false);
  Path first = dijkstra_banned(t, a, b, no_ban, {});
  if (first.devices.empty()) return {};

  std::vector<Path> found{first};
  std::set<Path, PathOrder> candidates;
  std::set<std::vector<DeviceId>> seen{first.devices};

  while (found.size() < k) {
    const Path& prev = found.back();
    for (std::size_t i = 0; i + 1 < prev.devices.size(); ++i) {
      const DeviceId spur = prev.devices[i];
      const std::vector<DeviceId> root(prev.devices.begin(),
                                       prev.devices.begin() + static_cast<std::ptrdiff_t>(i) + 1);

      std::set<std::pair<DeviceId, DeviceId>> banned_edges;
      for (const Path& p : found) {
        if (p.devices.size() > i + 1 &&
            std::equal(root.begin(), root.end(), p.devices.begin())) {
          banned_edges.insert({std::min(p.devices[i], p.devices[i + 1]),
                               std::max(p.devices[i], p.devices[i + 1])});
        }
      }
      std::vector<bool> banned_nodes(t.size(), false);
      for (std::size_t j = 0; j < i; ++j) banned_nodes[root[j]] = true;

      Path spur_path = dijkstra_banned(t, spur, b, banned_nodes, banned_edges);
      if (spur_path.devices.empty()) continue;

      Path total;
      total.devices = root;
      total.devices.insert(total.devices.end(), spur_path.devices.begin() + 1,
                           spur_path.devices.end());
      total.latency_ms = path_latency(t, total.devices);
      if (seen.insert(total.devices).second) candidates.insert(std::move(total));
    }
    if (candidates.empty()) break;
    found.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return found;
}

std::vector<PathCandidate> enumerate_paths(const Topology& t, DeviceId poa,
                                           const std::vector<NodeId>& chain_hosts, std::size_t k,
                                           const RoutingParams& params) {
  std::vector<DeviceId> waypoints{poa};
  for (NodeId host : chain_hosts) waypoints.push_back(t.nodes.at(host).attached_device);
  if (params.include_return_leg) waypoints.push_back(poa);

  std::vector<std::vector<Path>> legs;
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    legs.push_back(k_shortest_paths(t, waypoints[i], waypoints[i + 1], k));
    if (legs.back().empty()) return {};
  }

  const double proc = params.proc_latency_ms * static_cast<double>(chain_hosts.size());
  std::vector<PathCandidate> combos;
  std::vector<std::size_t> idx(legs.size(), 0);
  for (;;) {
    PathCandidate c;
    c.hosts = chain_hosts;
    c.hops = {poa};
    for (std::size_t l = 0; l < legs.size(); ++l) {
      const Path& leg = legs[l][idx[l]];
      if (!leg.devices.empty()) {
        c.hops.insert(c.hops.end(), leg.devices.begin() + 1, leg.devices.end());
      }
    }
    c.latency_ms = path_latency(t, c.hops) + proc;
    c.min_residual_bw = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < c.hops.size(); ++i) {
      c.min_residual_bw =
          std::min(c.min_residual_bw, t.links[*t.link_between(c.hops[i], c.hops[i + 1])].bandwidth);
    }
    if (c.hops.size() < 2) c.min_residual_bw = 0.0;
    combos.push_back(std::move(c));

    bool done = legs.empty();
    for (std::size_t l = legs.size(); !done;) {
      if (l == 0) {
        done = true;
        break;
      }
      --l;
      if (++idx[l] < legs[l].size()) break;
      idx[l] = 0;
    }
    if (done) break;
  }

  std::sort(combos.begin(), combos.end(), [](const PathCandidate& x, const PathCandidate& y) {
    if (x.latency_ms != y.latency_ms) return x.latency_ms < y.latency_ms;
    return x.hops < y.hops;
  });
  combos.erase(std::unique(combos.begin(), combos.end(),
                           [](const PathCandidate& x, const PathCandidate& y) {
                             return x.hops == y.hops;
                           }),
               combos.end());
  if (combos.size() > k) combos.resize(k);
  return combos;
}

std::vector<PathCandidate> enumerate_service_paths(const Topology& t, DeviceId poa,
                                                   const InstanceCatalog& catalog,
                                                   const Placement& placement, ServiceId service,
                                                   const RoutingParams& params) {
  std::vector<PathCandidate> out;
  for (std::uint32_t r = 0; r < catalog.replicas(service); ++r) {
    const auto& chain = catalog.chain(service, r);
    std::vector<NodeId> hosts;
    bool placed = true;
    for (InstanceId inst : chain) {
      auto node = placement.node_of(inst);
      if (!node) {
        placed = false;
        break;
      }
      hosts.push_back(*node);
    }
    if (!placed) continue;
    for (auto& c : enumerate_paths(t, poa, hosts, params.k_paths, params)) {
      c.service = service;
      c.replica = r;
      c.instances = chain;
      out.push_back(std::move(c));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const PathCandidate& x, const PathCandidate& y) {
    if (x.latency_ms != y.latency_ms) return x.latency_ms < y.latency_ms;
    if (x.replica != y.replica) return x.replica < y.replica;
    return x.hops < y.hops;
  });
  return out;
}

std::string to_string(FeasibilityVerdict::Kind kind) {
  switch (kind) {
    case FeasibilityVerdict::Kind::Feasible: return "feasible";
    case FeasibilityVerdict::Kind::Bandwidth: return "bandwidth";
    case FeasibilityVerdict::Kind::NodeCapacity: return "capacity";
    case FeasibilityVerdict::Kind::InstanceBudget: return "instance-budget";
    default: return "latency";
  }
}

FeasibilityVerdict check_feasibility(const PathCandidate& c, const Request& r,
                                     const ResourceLedger& usage, const Topology& t,
                                     const InstanceCatalog& catalog) {
  std::map<LinkId, long long> walked;
  for (std::size_t i = 0; i + 1 < c.hops.size(); ++i) {
    const LinkId link = *t.link_between(c.hops[i], c.hops[i + 1]);
    walked[link] += r.bandwidth_req;
    if (usage.link_load(link) + walked[link] > static_cast<long long>(t.links[link].bandwidth)) {
      return {FeasibilityVerdict::Kind::Bandwidth, link};
    }
  }
  std::map<NodeId, long long> visited;
  for (NodeId host : c.hosts) {
    visited[host] += r.capacity_req;
    if (usage.node_load(host) + visited[host] > static_cast<long long>(t.nodes[host].capacity)) {
      return {FeasibilityVerdict::Kind::NodeCapacity, host};
    }
  }
  for (InstanceId inst : c.instances) {
    if (usage.instance_load(inst) + r.capacity_req > catalog.instance(inst).capacity) {
      return {FeasibilityVerdict::Kind::InstanceBudget, inst};
    }
  }
  if (c.latency_ms > r.latency_budget_ms) {
    return {FeasibilityVerdict::Kind::Latency, kInvalidId};
  }
  return {};
}

SegmentList encode_segments(const std::vector<DeviceId>& hops, SegmentMode mode,
                            const Topology& t) {
  if (hops.empty()) throw routing_error("encode_segments: empty hop sequence");
  for (std::size_t i = 0; i + 1 < hops.size(); ++i) {
    if (!t.link_between(hops[i], hops[i + 1])) {
      throw routing_error("encode_segments: devices " + std::to_string(hops[i]) + " and " +
                          std::to_string(hops[i + 1]) + " are not adjacent");
    }
  }

  if (hops.size() == 1) return {mode, {hops[0]}};

  if (mode == SegmentMode::HopByHop) {
    return {SegmentMode::HopByHop, std::vector<DeviceId>(hops.begin() + 1, hops.end())};
  }

  // Greedy longest-prefix compression: one waypoint per maximal run that the
  // lexicographic shortest path reproduces exactly. Paths with a hop off
  // every shortest path are not waypoint-representable; fall back to the
  // hop-by-hop encoding then (the list stays self-describing via mode).
  SegmentList out{SegmentMode::Waypoint, {}};
  std::size_t i = 0;
  while (i + 1 < hops.size()) {
    const auto tree = shortest_path_tree(t, hops[i], PathMetric::Latency);
    std::size_t best = i;
    for (std::size_t j = i + 1; j < hops.size(); ++j) {
      const auto& label = tree.path[hops[j]];
      if (label.size() != j - i + 1 ||
          !std::equal(label.begin(), label.end(), hops.begin() + static_cast<std::ptrdiff_t>(i))) {
        break;
      }
      best = j;
    }
    if (best == i) {
      return {SegmentMode::HopByHop, std::vector<DeviceId>(hops.begin() + 1, hops.end())};
    }
    out.segments.push_back(hops[best]);
    i = best;
  }
  return out;
}

std::vector<DeviceId> simulate_forwarding(const Topology& t, const SegmentList& s, DeviceId origin) {
  if (s.segments.empty()) throw routing_error("simulate_forwarding: empty segment list");
  std::vector<DeviceId> realized{origin};
  DeviceId current = origin;
  for (DeviceId seg : s.segments) {
    if (seg == current) continue;  // label for the device we already stand on
    if (s.mode == SegmentMode::HopByHop) {
      if (!t.link_between(current, seg)) {
        throw routing_error("simulate_forwarding: segment " + std::to_string(seg) +
                            " not adjacent to " + std::to_string(current));
      }
      realized.push_back(seg);
    } else {
      const Path leg = shortest_path(t, current, seg, PathMetric::Latency);
      realized.insert(realized.end(), leg.devices.begin() + 1, leg.devices.end());
    }
    current = seg;
  }
  return realized;
}

std::string format_segment_list(const SegmentList& s) {
  std::string out = "SL[";
  for (std::size_t i = 0; i < s.segments.size(); ++i) {
    if (i > 0) out += ">";
    out += std::to_string(s.segments[i]);
  }
  out += "]";
  return out;
}

long long link_energy_units(const Topology& t, const std::vector<DeviceId>& hops,
                            int bandwidth_req) {
  long long total = 0;
  for (std::size_t i = 0; i + 1 < hops.size(); ++i) {
    const LinkId link = *t.link_between(hops[i], hops[i + 1]);
    total += static_cast<long long>(t.links[link].energy_per_unit) * bandwidth_req;
  }
  return total;
}

long long compute_energy_units(const Topology& t, const std::vector<NodeId>& hosts,
                               int capacity_req) {
  long long total = 0;
  for (NodeId host : hosts) {
    total += static_cast<long long>(t.nodes.at(host).energy_per_unit) * capacity_req;
  }
  return total;
}

Allocation to_allocation(const PathCandidate& c, const Request& r) {
  Allocation a;
  a.request = r.id;
  a.service = c.service;
  a.replica = c.replica;
  a.instances = c.instances;
  a.hosts = c.hosts;
  a.hops = c.hops;
  a.latency_ms = c.latency_ms;
  a.capacity_req = r.capacity_req;
  a.bandwidth_req = r.bandwidth_req;
  a.profit = r.profit;
  return a;
}

}  // namespace cnc
