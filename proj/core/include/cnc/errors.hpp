#pragma once

#include <stdexcept>
#include <string>

namespace cnc {

// Invalid sizes, ranges, or file/config contents. CLI maps this to exit 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Search space exceeds the configured solver limits. CLI maps this to exit 3.
class tractability_error : public std::runtime_error {
 public:
  explicit tractability_error(const std::string& what) : std::runtime_error(what) {}
};

// Dimensional or sequencing violations in the state pipeline.
class state_error : public std::runtime_error {
 public:
  explicit state_error(const std::string& what) : std::runtime_error(what) {}
};

// Workload generation without the required registrations.
class workload_error : public std::runtime_error {
 public:
  explicit workload_error(const std::string& what) : std::runtime_error(what) {}
};

// Placement problems (unhostable instance, double-placed instance).
class placement_error : public std::runtime_error {
 public:
  explicit placement_error(const std::string& what) : std::runtime_error(what) {}
};

// Forwarding/encoding misuse (empty segment list, non-adjacent hop).
class routing_error : public std::runtime_error {
 public:
  explicit routing_error(const std::string& what) : std::runtime_error(what) {}
};

// Context engine misuse (classify on empty codebook, conflicting keys).
class context_error : public std::runtime_error {
 public:
  explicit context_error(const std::string& what) : std::runtime_error(what) {}
};

// Agent-side misuse (empty action set, non-finite training input).
class agent_error : public std::runtime_error {
 public:
  explicit agent_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed dump/snapshot input.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cnc
