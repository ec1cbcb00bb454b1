#include "cnc/topology.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cnc/errors.hpp"
#include "cnc/rng.hpp"

namespace cnc {

namespace {

constexpr char kTopologyHeader[] = "# cncsim-topology v1";

std::uint32_t poa_count(std::uint32_t size, double fraction) {
  auto n = static_cast<std::uint32_t>(static_cast<double>(size) * fraction);
  return std::max<std::uint32_t>(1, n);
}

void append_device(Topology& t, std::uint32_t index, const TopologyParams& params,
                   std::uint64_t seed, std::uint32_t poas) {
  const std::uint32_t ordinal = index + 1;
  Rng dev_rng(substream_seed(seed, "device", index));
  NetworkDevice d;
  d.id = index;
  d.ports = params.ports_per_device;
  d.energy_per_unit = static_cast<double>(
      dev_rng.uniform_int(params.tiers.band_of(ordinal).lo, params.tiers.band_of(ordinal).hi));
  d.is_poa = index < poas;
  t.devices.push_back(d);

  Rng node_rng(substream_seed(seed, "node", index));
  ComputingNode n;
  n.id = index;
  n.capacity = static_cast<double>(node_rng.uniform_int(params.capacity.lo, params.capacity.hi));
  n.energy_per_unit = static_cast<double>(
      node_rng.uniform_int(params.tiers.band_of(ordinal).lo, params.tiers.band_of(ordinal).hi));
  n.attached_device = index;
  t.nodes.push_back(n);
}

void append_link(Topology& t, DeviceId a, DeviceId b, const TopologyParams& params,
                 std::uint64_t seed) {
  const auto id = static_cast<LinkId>(t.links.size());
  Rng rng(substream_seed(seed, "link-attr", id));
  Link l;
  l.id = id;
  l.a = std::min(a, b);
  l.b = std::max(a, b);
  l.bandwidth = static_cast<double>(rng.uniform_int(params.capacity.lo, params.capacity.hi));
  l.latency_ms = rng.uniform_real(params.link_latency.lo, params.link_latency.hi);
  // A link inherits the tier of its newest endpoint.
  const std::uint32_t ordinal = std::max(l.a, l.b) + 1;
  l.energy_per_unit = static_cast<double>(
      rng.uniform_int(params.tiers.band_of(ordinal).lo, params.tiers.band_of(ordinal).hi));
  t.links.push_back(l);
}

// Grows devices [base_size, new_size) plus their links: spanning-tree edge
// first for every new device, then extra links among pairs with at least one
// new endpoint until the drawn link budget (clamped to the simple-graph
// range) is met.
void grow_section(Topology& t, std::uint32_t base_size, std::uint32_t new_size,
                  const TopologyParams& params, std::uint64_t seed) {
  const std::uint32_t poas = base_size == 0 ? poa_count(new_size, params.poa_fraction) : 0;
  for (std::uint32_t i = base_size; i < new_size; ++i) {
    append_device(t, i, params, seed, poas);
  }

  for (std::uint32_t i = std::max<std::uint32_t>(base_size, 1); i < new_size; ++i) {
    Rng rng(substream_seed(seed, "link-tree", i));
    const auto parent = static_cast<DeviceId>(rng.below(i));
    append_link(t, parent, i, params, seed);
  }

  Rng count_rng(substream_seed(seed, "link-count", new_size));
  const auto v = static_cast<std::int64_t>(new_size);
  std::int64_t target = count_rng.uniform_int(params.links_lo_factor * v, params.links_hi_factor * v);
  target = std::clamp<std::int64_t>(target, v - 1, v * (v - 1) / 2);

  const auto have = static_cast<std::int64_t>(t.links.size());
  if (target <= have) {
    t.rebuild_adjacency();
    return;
  }

  t.rebuild_adjacency();
  std::vector<std::pair<DeviceId, DeviceId>> candidates;
  for (DeviceId a = 0; a < new_size; ++a) {
    for (DeviceId b = std::max(a + 1, base_size); b < new_size; ++b) {
      if (!t.link_between(a, b)) candidates.emplace_back(a, b);
    }
  }
  Rng extra_rng(substream_seed(seed, "link-extra", new_size));
  extra_rng.shuffle(candidates);
  const auto extra = std::min<std::size_t>(static_cast<std::size_t>(target - have), candidates.size());
  for (std::size_t i = 0; i < extra; ++i) {
    append_link(t, candidates[i].first, candidates[i].second, params, seed);
  }
  t.rebuild_adjacency();
}

}  // namespace

const std::vector<std::pair<DeviceId, LinkId>>& Topology::neighbors(DeviceId d) const {
  return adjacency_.at(d);
}

std::optional<LinkId> Topology::link_between(DeviceId a, DeviceId b) const {
  for (const auto& [nbr, link] : adjacency_.at(a)) {
    if (nbr == b) return link;
  }
  return std::nullopt;
}

std::vector<DeviceId> Topology::poas() const {
  std::vector<DeviceId> out;
  for (const auto& d : devices) {
    if (d.is_poa) out.push_back(d.id);
  }
  return out;
}

void Topology::rebuild_adjacency() {
  adjacency_.assign(devices.size(), {});
  for (const auto& l : links) {
    adjacency_[l.a].emplace_back(l.b, l.id);
    adjacency_[l.b].emplace_back(l.a, l.id);
  }
  for (auto& row : adjacency_) {
    std::sort(row.begin(), row.end());
  }
}

Topology generate_topology(std::uint32_t size, const TopologyParams& params, std::uint64_t seed) {
  if (size < 2) {
    throw config_error("topology size must be >= 2, got " + std::to_string(size));
  }
  Topology t;
  grow_section(t, 0, size, params, seed);
  return t;
}

Topology grow_topology(const Topology& base, std::uint32_t new_size, const TopologyParams& params,
                       std::uint64_t seed) {
  if (new_size <= base.size()) {
    throw config_error("grow_topology: new size " + std::to_string(new_size) +
                       " must exceed base size " + std::to_string(base.size()));
  }
  Topology t = base;
  grow_section(t, base.size(), new_size, params, seed);
  return t;
}

ShortestPathTree shortest_path_tree(const Topology& t, DeviceId src, PathMetric metric) {
  if (src >= t.size()) throw config_error("shortest_path: unknown device id");
  const double inf = std::numeric_limits<double>::infinity();
  ShortestPathTree tree;
  tree.dist.assign(t.size(), inf);
  tree.path.assign(t.size(), {});
  std::vector<bool> settled(t.size(), false);
  tree.dist[src] = 0.0;
  tree.path[src] = {src};

  for (;;) {
    DeviceId u = kInvalidId;
    for (DeviceId v = 0; v < t.size(); ++v) {
      if (settled[v] || tree.dist[v] == inf) continue;
      if (u == kInvalidId || tree.dist[v] < tree.dist[u] ||
          (tree.dist[v] == tree.dist[u] && tree.path[v] < tree.path[u])) {
        u = v;
      }
    }
    if (u == kInvalidId) break;
    settled[u] = true;
    for (const auto& [v, link] : t.neighbors(u)) {
      if (settled[v]) continue;
      const double w = metric == PathMetric::Latency ? t.links[link].latency_ms : 1.0;
      const double cand = tree.dist[u] + w;
      if (cand < tree.dist[v]) {
        tree.dist[v] = cand;
        tree.path[v] = tree.path[u];
        tree.path[v].push_back(v);
      } else if (cand == tree.dist[v]) {
        auto candidate = tree.path[u];
        candidate.push_back(v);
        if (candidate < tree.path[v]) tree.path[v] = std::move(candidate);
      }
    }
  }
  return tree;
}

Path shortest_path(const Topology& t, DeviceId a, DeviceId b, PathMetric metric) {
  if (a >= t.size() || b >= t.size()) {
    throw config_error("shortest_path: unknown device id");
  }
  if (a == b) return {};

  const auto tree = shortest_path_tree(t, a, metric);
  if (tree.path[b].empty()) {
    throw state_error("shortest_path: device " + std::to_string(b) + " unreachable from " +
                      std::to_string(a));
  }
  Path result;
  result.devices = tree.path[b];
  if (metric == PathMetric::Latency) {
    result.latency_ms = tree.dist[b];
  } else {
    // Hop metric still reports the realized latency of the chosen path.
    for (std::size_t i = 0; i + 1 < result.devices.size(); ++i) {
      result.latency_ms +=
          t.links[*t.link_between(result.devices[i], result.devices[i + 1])].latency_ms;
    }
  }
  return result;
}

void save_topology(const Topology& t, std::ostream& out) {
  out << kTopologyHeader << "\n";
  out << "size " << t.size() << "\n";
  out << std::setprecision(17);
  for (const auto& d : t.devices) {
    out << "device " << d.id << " " << d.ports << " " << d.energy_per_unit << " "
        << (d.is_poa ? 1 : 0) << "\n";
  }
  for (const auto& n : t.nodes) {
    out << "node " << n.id << " " << n.capacity << " " << n.energy_per_unit << " "
        << n.attached_device << "\n";
  }
  for (const auto& l : t.links) {
    out << "link " << l.id << " " << l.a << " " << l.b << " " << l.bandwidth << " " << l.latency_ms
        << " " << l.energy_per_unit << "\n";
  }
}

Topology load_topology(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTopologyHeader) {
    throw io_error("topology file: bad or missing header");
  }
  Topology t;
  std::uint32_t declared = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "size") {
      ls >> declared;
    } else if (kind == "device") {
      NetworkDevice d;
      int poa = 0;
      ls >> d.id >> d.ports >> d.energy_per_unit >> poa;
      d.is_poa = poa != 0;
      t.devices.push_back(d);
    } else if (kind == "node") {
      ComputingNode n;
      ls >> n.id >> n.capacity >> n.energy_per_unit >> n.attached_device;
      t.nodes.push_back(n);
    } else if (kind == "link") {
      Link l;
      ls >> l.id >> l.a >> l.b >> l.bandwidth >> l.latency_ms >> l.energy_per_unit;
      t.links.push_back(l);
    } else {
      throw io_error("topology file: unknown record '" + kind + "'");
    }
    if (!ls) throw io_error("topology file: malformed record '" + line + "'");
  }
  if (t.devices.size() != declared || t.nodes.size() != t.devices.size()) {
    throw io_error("topology file: size/device/node counts disagree");
  }
  for (const auto& l : t.links) {
    if (l.a >= t.size() || l.b >= t.size() || l.a == l.b) {
      throw io_error("topology file: link " + std::to_string(l.id) + " has bad endpoints");
    }
  }
  t.rebuild_adjacency();
  return t;
}

}  // namespace cnc
