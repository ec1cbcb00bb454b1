#include "cnc/context.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "cnc/errors.hpp"

namespace cnc {

ContextKey context_of_placement(const Placement& p) {
  std::vector<std::pair<InstanceId, NodeId>> bindings(p.bindings.begin(), p.bindings.end());
  return context_of_placement(bindings);
}

ContextKey context_of_placement(const std::vector<std::pair<InstanceId, NodeId>>& bindings) {
  std::map<NodeId, std::vector<InstanceId>> grouped;
  std::vector<bool> seen;
  for (const auto& [inst, node] : bindings) {
    if (inst >= seen.size()) seen.resize(inst + 1, false);
    if (seen[inst]) {
      throw context_error("instance " + std::to_string(inst) + " placed twice");
    }
    seen[inst] = true;
    grouped[node].push_back(inst);
  }
  ContextKey key;
  for (auto& [node, insts] : grouped) {
    std::sort(insts.begin(), insts.end());
    key.entries.emplace_back(node, std::move(insts));
  }
  return key;
}

void MinMaxNormalizer::observe(const std::vector<double>& v) {
  if (lo_.empty()) {
    lo_ = v;
    hi_ = v;
    return;
  }
  if (v.size() != lo_.size()) throw state_error("normalizer dimension changed");
  for (std::size_t i = 0; i < v.size(); ++i) {
    lo_[i] = std::min(lo_[i], v[i]);
    hi_[i] = std::max(hi_[i], v[i]);
  }
}

std::vector<double> MinMaxNormalizer::normalize(const std::vector<double>& v) const {
  if (v.size() != lo_.size()) throw state_error("normalizer dimension mismatch");
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double span = hi_[i] - lo_[i];
    out[i] = span > 0.0 ? (v[i] - lo_[i]) / span : 0.0;  // degenerate range pins to 0
  }
  return out;
}

std::vector<double> embed_state(const SystemState& s, const Topology& t, std::uint32_t depth,
                                MinMaxNormalizer& normalizer) {
  const std::size_t d_count = s.devices.size();
  const std::size_t l_count = s.links.size();
  const std::size_t n_count = s.nodes.size();
  if (d_count != t.devices.size() || l_count != t.links.size() || n_count != t.nodes.size()) {
    throw state_error("embed_state: state shape does not match topology");
  }
  const std::size_t k = d_count > 0 ? s.devices[0].indicators.size()
                        : l_count > 0 ? s.links[0].indicators.size()
                                      : 0;

  // Element graph: device <-> incident link, node <-> attached device.
  const std::size_t total = d_count + l_count + n_count;
  std::vector<std::vector<std::size_t>> adj(total);
  const auto dev = [&](std::size_t i) { return i; };
  const auto lnk = [&](std::size_t i) { return d_count + i; };
  const auto nod = [&](std::size_t i) { return d_count + l_count + i; };
  for (std::size_t l = 0; l < l_count; ++l) {
    adj[lnk(l)].push_back(dev(t.links[l].a));
    adj[lnk(l)].push_back(dev(t.links[l].b));
    adj[dev(t.links[l].a)].push_back(lnk(l));
    adj[dev(t.links[l].b)].push_back(lnk(l));
  }
  for (std::size_t n = 0; n < n_count; ++n) {
    adj[nod(n)].push_back(dev(t.nodes[n].attached_device));
    adj[dev(t.nodes[n].attached_device)].push_back(nod(n));
  }

  std::vector<std::vector<double>> h(total);
  const auto pad = [&](const std::vector<double>& ind) {
    std::vector<double> v = ind;
    v.resize(k, 0.0);
    return v;
  };
  for (std::size_t i = 0; i < d_count; ++i) h[dev(i)] = pad(s.devices[i].indicators);
  for (std::size_t i = 0; i < l_count; ++i) h[lnk(i)] = pad(s.links[i].indicators);
  for (std::size_t i = 0; i < n_count; ++i) h[nod(i)] = pad(s.nodes[i].indicators);

  for (std::uint32_t round = 0; round < depth; ++round) {
    std::vector<std::vector<double>> next(total, std::vector<double>(k, 0.0));
    for (std::size_t v = 0; v < total; ++v) {
      if (adj[v].empty()) {
        next[v] = h[v];
        continue;
      }
      std::vector<double> mean(k, 0.0);
      for (std::size_t u : adj[v]) {
        for (std::size_t i = 0; i < k; ++i) mean[i] += h[u][i];
      }
      for (std::size_t i = 0; i < k; ++i) {
        next[v][i] = 0.5 * h[v][i] + 0.5 * mean[i] / static_cast<double>(adj[v].size());
      }
    }
    h = std::move(next);
  }

  std::vector<double> flat;
  flat.reserve(total * k);
  for (std::size_t v = 0; v < total; ++v) {
    flat.insert(flat.end(), h[v].begin(), h[v].end());
  }
  normalizer.observe(flat);
  return normalizer.normalize(flat);
}

ContextCodebook::ContextCodebook(double vigilance, double update_rate, std::size_t capacity)
    : vigilance_(vigilance), update_rate_(update_rate), capacity_(capacity) {
  if (vigilance <= 0.0 || vigilance >= 1.0) throw config_error("vigilance must be in (0,1)");
  if (update_rate <= 0.0 || update_rate > 1.0) throw config_error("update rate must be in (0,1]");
  if (capacity == 0) throw config_error("context capacity must be >= 1");
}

ClassifyResult ContextCodebook::classify(const std::vector<double>& v) const {
  if (entries_.empty()) {
    throw context_error("classify on empty codebook; art_update must run first");
  }
  ClassifyResult best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& e : entries_) {
    if (e.centroid.size() != v.size()) {
      throw context_error("embedding dimension does not match codebook");
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double diff = v[i] - e.centroid[i];
      d2 += diff * diff;
    }
    const double d = std::sqrt(d2);
    if (d < best_dist) {  // entries sorted by id: strict < keeps the smaller id on ties
      best_dist = d;
      best.id = e.id;
    }
  }
  best.match = 1.0 - best_dist / std::sqrt(static_cast<double>(v.size()));
  return best;
}

ArtUpdateResult ContextCodebook::art_update(const std::vector<double>& v) {
  if (!entries_.empty()) {
    const ClassifyResult res = classify(v);
    if (res.match >= vigilance_) {
      for (auto& e : entries_) {
        if (e.id == res.id) {
          for (std::size_t i = 0; i < v.size(); ++i) {
            e.centroid[i] = (1.0 - update_rate_) * e.centroid[i] + update_rate_ * v[i];
          }
          ++e.updates;
          break;
        }
      }
      return {res.id, false};
    }
  }
  if (entries_.size() >= capacity_) {
    auto victim = std::min_element(entries_.begin(), entries_.end(),
                                   [](const ContextEntry& a, const ContextEntry& b) {
                                     if (a.updates != b.updates) return a.updates < b.updates;
                                     return a.id < b.id;
                                   });
    entries_.erase(victim);
  }
  ContextEntry e;
  e.id = next_id_++;
  e.centroid = v;
  entries_.push_back(std::move(e));
  return {entries_.back().id, true};
}

void ContextCodebook::set_key(ContextId id, ContextKey key) {
  for (auto& e : entries_) {
    if (e.id == id) {
      e.key = std::move(key);
      return;
    }
  }
  throw context_error("set_key: unknown context " + std::to_string(id));
}

const ContextEntry* ContextCodebook::find(ContextId id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

void ContextCodebook::dump(std::ostream& out) const {
  out << "# cncsim-codebook v1\n";
  out << "params " << std::setprecision(17) << vigilance_ << " " << update_rate_ << " " << capacity_
      << " " << next_id_ << "\n";
  for (const auto& e : entries_) {
    out << "ctx " << e.id << " " << e.updates;
    out << " key";
    for (const auto& [node, insts] : e.key.entries) {
      out << " " << node << ":";
      for (std::size_t i = 0; i < insts.size(); ++i) {
        if (i > 0) out << ",";
        out << insts[i];
      }
    }
    out << " centroid";
    for (double c : e.centroid) out << " " << c;
    out << "\n";
  }
}

ContextCodebook ContextCodebook::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# cncsim-codebook v1") {
    throw io_error("codebook: bad or missing header");
  }
  if (!std::getline(in, line)) throw io_error("codebook: missing params");
  std::istringstream ps(line);
  std::string tag;
  double vigilance, rate;
  std::size_t capacity;
  ContextId next;
  ps >> tag >> vigilance >> rate >> capacity >> next;
  if (!ps || tag != "params") throw io_error("codebook: malformed params");
  ContextCodebook cb(vigilance, rate, capacity);
  cb.next_id_ = next;

  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ls >> tag;
    if (tag != "ctx") throw io_error("codebook: unknown record '" + tag + "'");
    ContextEntry e;
    ls >> e.id >> e.updates >> tag;
    if (tag != "key") throw io_error("codebook: malformed entry");
    std::string token;
    bool in_centroid = false;
    std::vector<std::pair<InstanceId, NodeId>> bindings;
    while (ls >> token) {
      if (token == "centroid") {
        in_centroid = true;
        continue;
      }
      if (in_centroid) {
        e.centroid.push_back(std::stod(token));
      } else {
        const auto colon = token.find(':');
        if (colon == std::string::npos) throw io_error("codebook: malformed key " + token);
        const NodeId node = static_cast<NodeId>(std::stoul(token.substr(0, colon)));
        std::string rest = token.substr(colon + 1);
        std::istringstream is(rest);
        std::string inst;
        while (std::getline(is, inst, ',')) {
          if (!inst.empty()) bindings.emplace_back(std::stoul(inst), node);
        }
      }
    }
    e.key = context_of_placement(bindings);
    cb.entries_.push_back(std::move(e));
  }
  std::sort(cb.entries_.begin(), cb.entries_.end(),
            [](const ContextEntry& a, const ContextEntry& b) { return a.id < b.id; });
  return cb;
}

}  // namespace cnc
