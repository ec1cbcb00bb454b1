#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cnc/instances.hpp"
#include "cnc/state.hpp"
#include "cnc/topology.hpp"

namespace cnc {

using ContextId = std::uint32_t;

// Canonical instance-to-node map: sorted (node, sorted instances) entries.
// Equal placements under any insertion order map to equal keys.
struct ContextKey {
  std::vector<std::pair<NodeId, std::vector<InstanceId>>> entries;
  bool operator==(const ContextKey&) const = default;
  auto operator<=>(const ContextKey&) const = default;
};

ContextKey context_of_placement(const Placement& p);
ContextKey context_of_placement(const std::vector<std::pair<InstanceId, NodeId>>& bindings);

// Running per-feature min-max, pinning degenerate features to 0.
class MinMaxNormalizer {
 public:
  void observe(const std::vector<double>& v);
  std::vector<double> normalize(const std::vector<double>& v) const;
  std::size_t dims() const { return lo_.size(); }

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

// Fixed-length state embedding: per-element indicator vectors run through
// `depth` rounds of mean-neighbor aggregation over the element graph
// (device-link-node incidences), flattened in (devices, links, nodes) order
// and min-max normalized into [0,1].
std::vector<double> embed_state(const SystemState& s, const Topology& t, std::uint32_t depth,
                                MinMaxNormalizer& normalizer);

struct ContextEntry {
  ContextId id = 0;
  std::vector<double> centroid;
  ContextKey key;
  std::uint64_t updates = 1;
};

struct ClassifyResult {
  ContextId id = 0;
  double match = 0.0;  // 1 - distance/sqrt(dim)
};

struct ArtUpdateResult {
  ContextId id = 0;
  bool created = false;
};

// VQ codebook with resonance-gated growth: inputs matching the best entry at
// or above the vigilance fold into its centroid, everything else opens a new
// context (evicting the least-updated entry at capacity).
class ContextCodebook {
 public:
  ContextCodebook(double vigilance, double update_rate, std::size_t capacity);

  ClassifyResult classify(const std::vector<double>& v) const;
  ArtUpdateResult art_update(const std::vector<double>& v);

  void set_key(ContextId id, ContextKey key);
  const ContextEntry* find(ContextId id) const;
  const std::vector<ContextEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  double vigilance() const { return vigilance_; }

  void dump(std::ostream& out) const;
  static ContextCodebook load(std::istream& in);

 private:
  double vigilance_;
  double update_rate_;
  std::size_t capacity_;
  ContextId next_id_ = 0;
  std::vector<ContextEntry> entries_;  // sorted by id
};

}  // namespace cnc
