#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnc/topology.hpp"

namespace cnc {

using ServiceId = std::uint32_t;
using RequestId = std::uint32_t;
using Slot = std::uint32_t;

struct QosBounds {
  IntRange capacity{4, 8};      // mbps-equivalent compute per request
  IntRange bandwidth{2, 10};    // mbps
  RealRange latency{1.0, 3.0};  // ms
  IntRange profit{5, 15};
};

struct ServiceDescriptor {
  ServiceId id = 0;
  std::vector<std::string> chain;  // function chaining map, stage order
  int instance_capacity = 20;      // mbps per instance
  QosBounds qos;
  double expected_demand = 0.0;  // requests per slot hint
};

enum class Role { Primary, Auxiliary };

struct Request {
  RequestId id = 0;
  DeviceId user = 0;  // PoA the request enters through
  ServiceId service = 0;
  Role role = Role::Primary;
  int capacity_req = 0;
  int bandwidth_req = 0;
  double latency_budget_ms = 0.0;
  int packet_size = 1;
  int profit = 0;
  Slot slot = 0;
  std::optional<RequestId> linked;  // holographic pair partner
};

struct ServiceReport {
  ServiceId service = 0;
  Slot slot_begin = 0;
  Slot slot_end = 0;
  std::uint64_t served = 0;
  std::uint64_t rejected = 0;
  double mean_e2e_latency_ms = 0.0;  // over served requests
  std::uint64_t qos_violations = 0;
};

// Names used by the Fig.4-style holographic preset.
ServiceDescriptor holographic_primary_descriptor(ServiceId id);
ServiceDescriptor holographic_auxiliary_descriptor(ServiceId id);

class ServiceRegistry {
 public:
  ServiceId register_service(ServiceDescriptor d);
  // Registers the primary (view-structure -> polish) and auxiliary (polish)
  // services; returns their ids.
  std::pair<ServiceId, ServiceId> register_holographic_preset();

  bool has(ServiceId id) const;
  const ServiceDescriptor& service(ServiceId id) const;
  const std::vector<ServiceDescriptor>& services() const { return services_; }
  std::size_t count() const { return services_.size(); }

  // `count` requests with Table-1 attribute draws, uniform over PoAs and
  // registered services. Pure function of (slot, seed, registry, poas).
  std::vector<Request> generate_requests(Slot slot, const std::vector<DeviceId>& poas,
                                         std::size_t count, std::uint64_t seed) const;

  // One primary + one auxiliary request sharing user and slot.
  std::pair<Request, Request> decompose_holographic(DeviceId user, Slot slot,
                                                    std::uint64_t seed) const;

  // Synthetic services with chain lengths drawn in [1,3].
  static ServiceRegistry make_synthetic(std::size_t count, std::uint64_t seed);

 private:
  std::vector<ServiceDescriptor> services_;
  std::optional<ServiceId> holo_primary_;
  std::optional<ServiceId> holo_auxiliary_;
};

}  // namespace cnc
