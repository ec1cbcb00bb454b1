#include "cnc/predictor.hpp"

#include <algorithm>

#include "cnc/errors.hpp"

namespace cnc {

StateWindow::StateWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw state_error("state window capacity must be >= 1");
}

void StateWindow::push(SystemState state) {
  if (!states_.empty() && state.slot != states_.back().slot + 1) {
    throw state_error("state window slots must be contiguous: " +
                      std::to_string(states_.back().slot) + " then " + std::to_string(state.slot));
  }
  states_.push_back(std::move(state));
  while (states_.size() > capacity_) states_.pop_front();
}

namespace {

// x_hat <- alpha*x + (1-alpha)*x_hat, folded over the window in slot order.
double smooth(double acc, double x, double alpha) { return alpha * x + (1.0 - alpha) * acc; }

bool same_binding_structure(const SystemState& a, const SystemState& b) {
  if (a.bindings.size() != b.bindings.size()) return false;
  for (std::size_t i = 0; i < a.bindings.size(); ++i) {
    if (a.bindings[i].service != b.bindings[i].service ||
        a.bindings[i].instance_nodes != b.bindings[i].instance_nodes ||
        a.bindings[i].poa_paths.size() != b.bindings[i].poa_paths.size()) {
      return false;
    }
  }
  return true;
}

}  // namespace

SystemState predict_next(const StateWindow& w, double smoothing_alpha) {
  if (w.empty()) throw state_error("predict_next: empty window");
  const auto& states = w.states();
  SystemState out = states.back();  // structure carried from the latest state
  out.slot = states.back().slot + 1;
  out.context = states.back().context;

  const auto smooth_elements = [&](std::vector<ElementAnnotation> SystemState::* member) {
    auto& target = out.*member;
    for (std::size_t e = 0; e < target.size(); ++e) {
      // Initialize from the oldest state, then fold forward.
      double load = (states.front().*member)[e].load;
      std::vector<double> ind = (states.front().*member)[e].indicators;
      for (std::size_t s = 1; s < states.size(); ++s) {
        const auto& cur = (states[s].*member)[e];
        load = smooth(load, cur.load, smoothing_alpha);
        for (std::size_t i = 0; i < ind.size(); ++i) {
          ind[i] = smooth(ind[i], cur.indicators[i], smoothing_alpha);
        }
      }
      target[e].load = load;
      target[e].indicators = std::move(ind);
    }
  };
  smooth_elements(&SystemState::devices);
  smooth_elements(&SystemState::links);
  smooth_elements(&SystemState::nodes);

  // Instance loads only smooth across a structurally stable window; a
  // placement change mid-window resets the forecast to the latest values.
  bool stable = true;
  for (const auto& st : states) {
    if (!same_binding_structure(st, states.back())) {
      stable = false;
      break;
    }
  }
  if (stable) {
    for (std::size_t b = 0; b < out.bindings.size(); ++b) {
      for (std::size_t i = 0; i < out.bindings[b].instance_loads.size(); ++i) {
        double acc = states.front().bindings[b].instance_loads[i];
        for (std::size_t s = 1; s < states.size(); ++s) {
          acc = smooth(acc, states[s].bindings[b].instance_loads[i], smoothing_alpha);
        }
        out.bindings[b].instance_loads[i] = acc;
      }
    }
  }
  return out;
}

std::vector<Violation> detect_infeasibility(const SystemState& predicted, const Topology& t,
                                            const InstanceCatalog& catalog,
                                            const ServiceRegistry& registry,
                                            const DetectionParams& params) {
  std::vector<Violation> out;
  for (std::uint32_t l = 0; l < predicted.links.size(); ++l) {
    const double limit = t.links[l].bandwidth * params.headroom;
    if (predicted.links[l].load > limit) {
      out.push_back({Violation::Element::Link, Violation::Kind::Bandwidth, l,
                     predicted.links[l].load, limit});
    }
  }
  for (std::uint32_t n = 0; n < predicted.nodes.size(); ++n) {
    const double limit = t.nodes[n].capacity * params.headroom;
    if (predicted.nodes[n].load > limit) {
      out.push_back({Violation::Element::Node, Violation::Kind::Capacity, n,
                     predicted.nodes[n].load, limit});
    }
  }
  for (const auto& b : predicted.bindings) {
    for (std::size_t i = 0; i < b.instance_nodes.size(); ++i) {
      const double limit =
          static_cast<double>(catalog.instance(b.instance_nodes[i].first).capacity) *
          params.headroom;
      if (b.instance_loads[i] > limit) {
        out.push_back({Violation::Element::Instance, Violation::Kind::Capacity,
                       b.instance_nodes[i].first, b.instance_loads[i], limit});
      }
    }
    // A service is latency-infeasible at a PoA when even its best bound path
    // exceeds the largest admissible request latency.
    if (registry.has(b.service)) {
      const double limit = registry.service(b.service).qos.latency.hi * params.headroom;
      for (const auto& pp : b.poa_paths) {
        if (pp.min_latency_ms > limit) {
          out.push_back({Violation::Element::Service, Violation::Kind::Latency, b.service,
                         pp.min_latency_ms, limit});
        }
      }
    }
  }
  return out;
}

}  // namespace cnc
