#include "cnc/service.hpp"

#include <algorithm>
#include <string>

#include "cnc/errors.hpp"
#include "cnc/rng.hpp"

namespace cnc {

namespace {

Request draw_request(RequestId id, DeviceId user, const ServiceDescriptor& svc, Slot slot,
                     Rng& rng) {
  Request r;
  r.id = id;
  r.user = user;
  r.service = svc.id;
  r.role = Role::Primary;
  r.capacity_req = static_cast<int>(rng.uniform_int(svc.qos.capacity.lo, svc.qos.capacity.hi));
  r.bandwidth_req = static_cast<int>(rng.uniform_int(svc.qos.bandwidth.lo, svc.qos.bandwidth.hi));
  r.latency_budget_ms = rng.uniform_real(svc.qos.latency.lo, svc.qos.latency.hi);
  r.packet_size = 1;
  r.profit = static_cast<int>(rng.uniform_int(svc.qos.profit.lo, svc.qos.profit.hi));
  r.slot = slot;
  return r;
}

}  // namespace

ServiceDescriptor holographic_primary_descriptor(ServiceId id) {
  ServiceDescriptor d;
  d.id = id;
  d.chain = {"view-structure", "polish"};
  return d;
}

ServiceDescriptor holographic_auxiliary_descriptor(ServiceId id) {
  ServiceDescriptor d;
  d.id = id;
  d.chain = {"polish"};
  return d;
}

ServiceId ServiceRegistry::register_service(ServiceDescriptor d) {
  if (d.chain.empty()) {
    throw config_error("service " + std::to_string(d.id) + ": chain must be non-empty");
  }
  for (const auto& label : d.chain) {
    if (label.empty()) {
      throw config_error("service " + std::to_string(d.id) + ": empty chain label");
    }
  }
  if (d.instance_capacity <= 0) {
    throw config_error("service " + std::to_string(d.id) + ": instance capacity must be > 0");
  }
  if (has(d.id)) {
    throw config_error("service id " + std::to_string(d.id) + " already registered");
  }
  services_.push_back(std::move(d));
  return services_.back().id;
}

std::pair<ServiceId, ServiceId> ServiceRegistry::register_holographic_preset() {
  const auto next_id = static_cast<ServiceId>(
      services_.empty() ? 0 : std::max_element(services_.begin(), services_.end(),
                                               [](const auto& a, const auto& b) {
                                                 return a.id < b.id;
                                               })->id + 1);
  holo_primary_ = register_service(holographic_primary_descriptor(next_id));
  holo_auxiliary_ = register_service(holographic_auxiliary_descriptor(next_id + 1));
  return {*holo_primary_, *holo_auxiliary_};
}

bool ServiceRegistry::has(ServiceId id) const {
  return std::any_of(services_.begin(), services_.end(),
                     [id](const ServiceDescriptor& s) { return s.id == id; });
}

const ServiceDescriptor& ServiceRegistry::service(ServiceId id) const {
  for (const auto& s : services_) {
    if (s.id == id) return s;
  }
  throw config_error("unknown service id " + std::to_string(id));
}

std::vector<Request> ServiceRegistry::generate_requests(Slot slot, const std::vector<DeviceId>& poas,
                                                        std::size_t count,
                                                        std::uint64_t seed) const {
  if (services_.empty()) throw workload_error("no services registered");
  if (poas.empty()) throw workload_error("no PoAs available");

  Rng rng(substream_seed(seed, "workload", slot));
  std::vector<Request> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const DeviceId user = rng.pick(poas);
    const ServiceDescriptor& svc = services_[rng.pick_index(services_.size())];
    out.push_back(draw_request(static_cast<RequestId>(i), user, svc, slot, rng));
  }
  return out;
}

std::pair<Request, Request> ServiceRegistry::decompose_holographic(DeviceId user, Slot slot,
                                                                   std::uint64_t seed) const {
  if (!holo_primary_ || !holo_auxiliary_) {
    throw workload_error("holographic preset not registered");
  }
  Rng rng(substream_seed(seed, "holographic", slot));
  Request primary = draw_request(0, user, service(*holo_primary_), slot, rng);
  Request auxiliary = draw_request(1, user, service(*holo_auxiliary_), slot, rng);
  primary.role = Role::Primary;
  auxiliary.role = Role::Auxiliary;
  primary.linked = auxiliary.id;
  auxiliary.linked = primary.id;
  return {primary, auxiliary};
}

ServiceRegistry ServiceRegistry::make_synthetic(std::size_t count, std::uint64_t seed) {
  ServiceRegistry reg;
  Rng rng(substream_seed(seed, "services"));
  for (std::size_t i = 0; i < count; ++i) {
    ServiceDescriptor d;
    d.id = static_cast<ServiceId>(i);
    const auto stages = static_cast<std::size_t>(rng.uniform_int(1, 3));
    for (std::size_t s = 0; s < stages; ++s) {
      d.chain.push_back("fn" + std::to_string(i) + "." + std::to_string(s));
    }
    reg.register_service(std::move(d));
  }
  return reg;
}

}  // namespace cnc
