#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "cnc/instances.hpp"
#include "cnc/service.hpp"
#include "cnc/state.hpp"
#include "cnc/topology.hpp"

namespace cnc {

// Last T_E system states, strictly increasing contiguous slots.
class StateWindow {
 public:
  explicit StateWindow(std::size_t capacity);
  void push(SystemState state);
  bool empty() const { return states_.empty(); }
  std::size_t size() const { return states_.size(); }
  const std::deque<SystemState>& states() const { return states_; }

 private:
  std::size_t capacity_;
  std::deque<SystemState> states_;
};

// Per-feature exponential smoothing over the window; structural fields come
// from the latest state. The signature is the plug point: a recurrent
// forecaster can replace it without touching callers.
SystemState predict_next(const StateWindow& w, double smoothing_alpha);

using NextStatePredictor = SystemState (*)(const StateWindow&, double);

struct Violation {
  enum class Element { Link, Node, Instance, Service };
  enum class Kind { Bandwidth, Capacity, Latency };
  Element element_kind = Element::Link;
  Kind kind = Kind::Bandwidth;
  std::uint32_t element = 0;
  double predicted = 0.0;
  double limit = 0.0;
};

struct DetectionParams {
  double headroom = 1.0;  // limits scaled by this factor before comparison
};

// Every element whose predicted load exceeds its capacity, plus every
// service whose best bound path exceeds the service's admissible latency.
// Violations are reported iff predicted value > limit.
std::vector<Violation> detect_infeasibility(const SystemState& predicted, const Topology& t,
                                            const InstanceCatalog& catalog,
                                            const ServiceRegistry& registry,
                                            const DetectionParams& params = {});

}  // namespace cnc
