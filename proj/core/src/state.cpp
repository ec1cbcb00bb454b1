#include "cnc/state.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "cnc/errors.hpp"

namespace cnc {

ShortTermResourceState::ShortTermResourceState(Owner owner, Slot slot, StateDims dims)
    : owner_(owner), slot_(slot), dims_(dims) {
  if (dims.cell_count() == 0) throw state_error("state dimensions must all be >= 1");
  cells_.assign(dims.cell_count(), 0.0);
  present_.assign(dims.cell_count() / dims.metrics, false);
}

std::size_t ShortTermResourceState::cell_index(std::uint32_t u, std::uint32_t s, std::uint32_t r,
                                               std::uint32_t p, std::uint32_t m) const {
  if (u >= dims_.users || s >= dims_.services || r >= dims_.requests || p >= dims_.ports ||
      m >= dims_.metrics) {
    throw state_error("sample index out of declared dimensions");
  }
  return (((static_cast<std::size_t>(u) * dims_.services + s) * dims_.requests + r) * dims_.ports +
          p) *
             dims_.metrics +
         m;
}

void ShortTermResourceState::record(std::uint32_t user, std::uint32_t service,
                                    std::uint32_t request, std::uint32_t port,
                                    std::span<const double> metrics) {
  if (metrics.size() != dims_.metrics) {
    throw state_error("metric vector arity " + std::to_string(metrics.size()) +
                      " does not match M_R=" + std::to_string(dims_.metrics));
  }
  for (double v : metrics) {
    if (!std::isfinite(v)) throw state_error("non-finite metric value");
  }
  const std::size_t base = cell_index(user, service, request, port, 0);
  for (std::uint32_t m = 0; m < dims_.metrics; ++m) cells_[base + m] = metrics[m];
  present_[base / dims_.metrics] = true;
}

double ShortTermResourceState::at(std::uint32_t user, std::uint32_t service, std::uint32_t request,
                                  std::uint32_t port, std::uint32_t metric) const {
  return cells_[cell_index(user, service, request, port, metric)];
}

bool ShortTermResourceState::present(std::uint32_t user, std::uint32_t service,
                                     std::uint32_t request, std::uint32_t port) const {
  return present_[cell_index(user, service, request, port, 0) / dims_.metrics];
}

std::size_t ShortTermResourceState::present_count() const {
  return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), true));
}

LongTermResourceState::LongTermResourceState(std::uint32_t window_length)
    : window_length_(window_length) {
  if (window_length == 0) throw state_error("window length must be >= 1");
}

void LongTermResourceState::push(ShortTermResourceState state) {
  if (!states_.empty()) {
    const auto& last = states_.back();
    if (state.slot() != last.slot() + 1) {
      throw state_error("window slots must be contiguous: " + std::to_string(last.slot()) +
                        " then " + std::to_string(state.slot()));
    }
    if (!(state.owner() == last.owner())) throw state_error("window owner mismatch");
  }
  states_.push_back(std::move(state));
  while (states_.size() > window_length_) states_.pop_front();
}

const std::vector<Indicator>& default_indicators() {
  static const std::vector<Indicator> set{Indicator::Mean, Indicator::Max, Indicator::Last};
  return set;
}

std::string indicator_name(Indicator i) {
  switch (i) {
    case Indicator::Mean: return "mean";
    case Indicator::Max: return "max";
    case Indicator::Min: return "min";
    default: return "last";
  }
}

Indicator parse_indicator(const std::string& name) {
  if (name == "mean") return Indicator::Mean;
  if (name == "max") return Indicator::Max;
  if (name == "min") return Indicator::Min;
  if (name == "last") return Indicator::Last;
  throw config_error("unknown indicator '" + name + "'");
}

namespace {

double apply_indicator(Indicator ind, std::span<const double> window_values,
                       std::span<const double> last_values) {
  if (window_values.empty()) return 0.0;
  switch (ind) {
    case Indicator::Mean: {
      double sum = 0.0;
      for (double v : window_values) sum += v;
      return sum / static_cast<double>(window_values.size());
    }
    case Indicator::Max: {
      double best = window_values[0];
      for (double v : window_values) best = std::max(best, v);
      return best;
    }
    case Indicator::Min: {
      double best = window_values[0];
      for (double v : window_values) best = std::min(best, v);
      return best;
    }
    default: {  // Last: mean over the latest slot's slice
      if (last_values.empty()) return 0.0;
      double sum = 0.0;
      for (double v : last_values) sum += v;
      return sum / static_cast<double>(last_values.size());
    }
  }
}

}  // namespace

ReducedResourceState reduce_resource_state(const LongTermResourceState& window,
                                           const std::vector<Indicator>& indicator_set) {
  if (window.empty()) throw state_error("reduce_resource_state: empty window");
  if (indicator_set.empty()) throw state_error("reduce_resource_state: empty indicator set");

  const auto& states = window.states();
  const StateDims dims = states.front().dims();
  ReducedResourceState out;
  out.owner = states.front().owner();
  out.slot = states.back().slot();
  out.services = dims.services;
  out.ports = dims.ports;
  out.indicators = indicator_set;
  out.values.reserve(static_cast<std::size_t>(dims.services) * dims.ports * indicator_set.size());

  std::vector<double> slice;
  std::vector<double> last_slice;
  for (std::uint32_t s = 0; s < dims.services; ++s) {
    for (std::uint32_t p = 0; p < dims.ports; ++p) {
      slice.clear();
      last_slice.clear();
      for (const auto& st : states) {
        const bool is_last = &st == &states.back();
        for (std::uint32_t u = 0; u < dims.users; ++u) {
          for (std::uint32_t r = 0; r < dims.requests; ++r) {
            for (std::uint32_t m = 0; m < dims.metrics; ++m) {
              const double v = st.at(u, s, r, p, m);
              slice.push_back(v);
              if (is_last) last_slice.push_back(v);
            }
          }
        }
      }
      for (Indicator ind : indicator_set) {
        out.values.push_back(apply_indicator(ind, slice, last_slice));
      }
    }
  }
  return out;
}

ReducedDomainState reduce_domain_state(std::span<const DomainState> window,
                                       const std::vector<Indicator>& indicator_set) {
  if (window.empty()) throw state_error("reduce_domain_state: empty window");
  if (indicator_set.empty()) throw state_error("reduce_domain_state: empty indicator set");
  const DomainState& head = window.front();
  for (const auto& d : window) {
    if (d.services != head.services || d.elements != head.elements || d.links != head.links ||
        d.metrics != head.metrics || d.domain != head.domain) {
      throw state_error("reduce_domain_state: window shape mismatch");
    }
  }

  ReducedDomainState out;
  out.domain = head.domain;
  out.slot = window.back().slot;
  out.services = head.services;
  out.elements = head.elements;
  out.links = head.links;
  out.indicators = indicator_set;
  const std::size_t k = indicator_set.size();
  out.values.assign(static_cast<std::size_t>(head.services) * head.elements * head.links * k, 0.0);

  // Per-slot mean metric value per element / per link, then the interaction
  // scalar 0.5*(element + link) is what the indicators summarize.
  const auto mean_metric = [&](const DomainState& d, bool link_side, std::uint32_t s,
                               std::uint32_t idx) {
    double sum = 0.0;
    for (std::uint32_t m = 0; m < d.metrics; ++m) {
      sum += link_side ? d.link_at(s, idx, m) : d.element_at(s, idx, m);
    }
    return d.metrics == 0 ? 0.0 : sum / static_cast<double>(d.metrics);
  };

  std::vector<double> series(window.size());
  for (std::uint32_t s = 0; s < head.services; ++s) {
    for (std::uint32_t n = 0; n < head.elements; ++n) {
      for (std::uint32_t l = 0; l < head.links; ++l) {
        for (std::size_t w = 0; w < window.size(); ++w) {
          series[w] =
              0.5 * (mean_metric(window[w], false, s, n) + mean_metric(window[w], true, s, l));
        }
        const std::span<const double> all(series);
        const std::span<const double> last(series.data() + series.size() - 1, 1);
        for (std::size_t i = 0; i < k; ++i) {
          out.values[(((static_cast<std::size_t>(s) * head.elements + n) * head.links) + l) * k +
                     i] = apply_indicator(indicator_set[i], all, last);
        }
      }
    }
  }

  // Element/link marginals for graph annotation. With no link-like elements
  // (single-stage chains), the indicator runs on the element series alone.
  out.element_indicators.assign(static_cast<std::size_t>(head.elements) * k, 0.0);
  for (std::uint32_t n = 0; n < head.elements; ++n) {
    if (head.links > 0 && head.services > 0) {
      for (std::size_t i = 0; i < k; ++i) {
        double sum = 0.0;
        for (std::uint32_t s = 0; s < head.services; ++s) {
          for (std::uint32_t l = 0; l < head.links; ++l) sum += out.at(s, n, l, i);
        }
        out.element_indicators[n * k + i] =
            sum / (static_cast<double>(head.services) * head.links);
      }
    } else if (head.services > 0) {
      for (std::size_t w = 0; w < window.size(); ++w) {
        double sum = 0.0;
        for (std::uint32_t s = 0; s < head.services; ++s) {
          sum += mean_metric(window[w], false, s, n);
        }
        series[w] = sum / static_cast<double>(head.services);
      }
      const std::span<const double> all(series);
      const std::span<const double> last(series.data() + series.size() - 1, 1);
      for (std::size_t i = 0; i < k; ++i) {
        out.element_indicators[n * k + i] = apply_indicator(indicator_set[i], all, last);
      }
    }
  }
  out.link_indicators.assign(static_cast<std::size_t>(head.links) * k, 0.0);
  for (std::uint32_t l = 0; l < head.links; ++l) {
    if (head.elements > 0 && head.services > 0) {
      for (std::size_t i = 0; i < k; ++i) {
        double sum = 0.0;
        for (std::uint32_t s = 0; s < head.services; ++s) {
          for (std::uint32_t n = 0; n < head.elements; ++n) sum += out.at(s, n, l, i);
        }
        out.link_indicators[l * k + i] =
            sum / (static_cast<double>(head.services) * head.elements);
      }
    }
  }
  return out;
}

SystemState build_system_state(const ReducedDomainState& network,
                               const ReducedDomainState& computing, const Topology& t,
                               const Placement& placement, const InstanceCatalog& catalog) {
  if (network.slot != computing.slot) {
    throw state_error("build_system_state: domain slots disagree (" +
                      std::to_string(network.slot) + " vs " + std::to_string(computing.slot) + ")");
  }
  if (network.elements != t.size() || network.links != t.links.size()) {
    throw state_error("build_system_state: network domain shape does not match topology");
  }
  const std::size_t k = network.indicators.size();

  SystemState st;
  st.slot = network.slot;
  st.devices.resize(t.devices.size());
  st.links.resize(t.links.size());
  st.nodes.resize(t.nodes.size());
  for (std::uint32_t d = 0; d < t.devices.size(); ++d) {
    st.devices[d].indicators.assign(network.element_indicators.begin() + d * k,
                                    network.element_indicators.begin() + (d + 1) * k);
  }
  for (std::uint32_t l = 0; l < t.links.size(); ++l) {
    st.links[l].indicators.assign(network.link_indicators.begin() + l * k,
                                  network.link_indicators.begin() + (l + 1) * k);
    st.links[l].capacity = t.links[l].bandwidth;
  }
  // Node annotation: mean over hosted instances' computing-domain marginals.
  const std::size_t kc = computing.indicators.size();
  std::vector<std::vector<double>> sums(t.nodes.size(), std::vector<double>(kc, 0.0));
  std::vector<std::size_t> hosted(t.nodes.size(), 0);
  for (const auto& [inst, node] : placement.bindings) {
    if (inst >= computing.elements) continue;
    for (std::size_t i = 0; i < kc; ++i) {
      sums[node][i] += computing.element_indicators[inst * kc + i];
    }
    ++hosted[node];
  }
  for (std::uint32_t n = 0; n < t.nodes.size(); ++n) {
    st.nodes[n].indicators.assign(kc, 0.0);
    if (hosted[n] > 0) {
      for (std::size_t i = 0; i < kc; ++i) {
        st.nodes[n].indicators[i] = sums[n][i] / static_cast<double>(hosted[n]);
      }
    }
    st.nodes[n].capacity = t.nodes[n].capacity;
  }

  // Unified binding table: each placed instance appears exactly once.
  std::map<ServiceId, ServiceBinding> bindings;
  for (const auto& [inst, node] : placement.bindings) {
    const auto& meta = catalog.instance(inst);
    auto& b = bindings[meta.service];
    b.service = meta.service;
    b.instance_nodes.emplace_back(inst, node);
  }
  for (auto& [svc, b] : bindings) {
    std::sort(b.instance_nodes.begin(), b.instance_nodes.end());
    b.instance_loads.assign(b.instance_nodes.size(), 0.0);
    st.bindings.push_back(std::move(b));
  }
  return st;
}

void annotate_loads(SystemState& state, const Topology& t, const InstanceCatalog& catalog,
                    const ResourceLedger& ledger) {
  for (std::uint32_t l = 0; l < t.links.size(); ++l) {
    state.links[l].load = static_cast<double>(ledger.link_load(l));
  }
  for (std::uint32_t n = 0; n < t.nodes.size(); ++n) {
    state.nodes[n].load = static_cast<double>(ledger.node_load(n));
  }
  // Devices forward the traffic of both endpoints' links.
  for (std::uint32_t d = 0; d < t.devices.size(); ++d) {
    double total = 0.0;
    for (const auto& [nbr, link] : t.neighbors(d)) total += static_cast<double>(ledger.link_load(link));
    state.devices[d].load = total;
  }
  for (auto& b : state.bindings) {
    for (std::size_t i = 0; i < b.instance_nodes.size(); ++i) {
      b.instance_loads[i] = static_cast<double>(ledger.instance_load(b.instance_nodes[i].first));
    }
  }
  (void)catalog;
}

MemoryBank::MemoryBank(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw state_error("memory bank capacity must be >= 1");
}

void MemoryBank::push(SystemState state) {
  states_.push_back(std::move(state));
  while (states_.size() > capacity_) states_.pop_front();
}

void MemoryBank::dump(std::ostream& out) const {
  out << "# cncsim-memorybank v1\n";
  out << "capacity " << capacity_ << "\n";
  out << std::setprecision(17);
  for (const auto& st : states_) {
    out << "state " << st.slot << " "
        << (st.context ? std::to_string(*st.context) : std::string("-")) << "\n";
    const auto put = [&](char tag, const std::vector<ElementAnnotation>& elems) {
      for (std::size_t i = 0; i < elems.size(); ++i) {
        out << tag << " " << i << " " << elems[i].load << " " << elems[i].capacity;
        for (double v : elems[i].indicators) out << " " << v;
        out << "\n";
      }
    };
    put('d', st.devices);
    put('l', st.links);
    put('n', st.nodes);
    for (const auto& b : st.bindings) {
      out << "b " << b.service;
      for (std::size_t i = 0; i < b.instance_nodes.size(); ++i) {
        out << " " << b.instance_nodes[i].first << ":" << b.instance_nodes[i].second << ":"
            << b.instance_loads[i];
      }
      out << "\n";
    }
    out << "end\n";
  }
}

MemoryBank MemoryBank::load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# cncsim-memorybank v1") {
    throw io_error("memory bank: bad or missing header");
  }
  std::size_t capacity = 0;
  if (!(in >> line >> capacity) || line != "capacity") {
    throw io_error("memory bank: missing capacity record");
  }
  std::getline(in, line);
  MemoryBank bank(capacity);

  SystemState current;
  bool open = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "state") {
      current = SystemState{};
      std::string ctx;
      ls >> current.slot >> ctx;
      if (ctx != "-") current.context = static_cast<std::uint32_t>(std::stoul(ctx));
      open = true;
    } else if (tag == "d" || tag == "l" || tag == "n") {
      if (!open) throw io_error("memory bank: element outside state block");
      ElementAnnotation e;
      std::size_t idx;
      ls >> idx >> e.load >> e.capacity;
      double v;
      while (ls >> v) e.indicators.push_back(v);
      auto& vec = tag == "d" ? current.devices : tag == "l" ? current.links : current.nodes;
      if (idx != vec.size()) throw io_error("memory bank: element index out of order");
      vec.push_back(std::move(e));
    } else if (tag == "b") {
      if (!open) throw io_error("memory bank: binding outside state block");
      ServiceBinding b;
      ls >> b.service;
      std::string triple;
      while (ls >> triple) {
        const auto c1 = triple.find(':');
        const auto c2 = triple.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
          throw io_error("memory bank: malformed binding '" + triple + "'");
        }
        b.instance_nodes.emplace_back(std::stoul(triple.substr(0, c1)),
                                      std::stoul(triple.substr(c1 + 1, c2 - c1 - 1)));
        b.instance_loads.push_back(std::stod(triple.substr(c2 + 1)));
      }
      current.bindings.push_back(std::move(b));
    } else if (tag == "end") {
      if (!open) throw io_error("memory bank: stray end");
      bank.push(std::move(current));
      open = false;
    } else {
      throw io_error("memory bank: unknown record '" + tag + "'");
    }
  }
  if (open) throw io_error("memory bank: unterminated state block");
  return bank;
}

}  // namespace cnc
