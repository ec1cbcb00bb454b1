#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cnc/ledger.hpp"
#include "cnc/placement.hpp"
#include "cnc/routing.hpp"
#include "cnc/state.hpp"

namespace cnc {

class Rng;

enum class PolicyKind { Rnd, Greedy, Ddql, DdqlGnn, Opt };

std::string policy_name(PolicyKind p);
PolicyKind parse_policy(const std::string& name);

// Available (instance, path) pairs of one PoA in the active context.
struct ActionSet {
  std::vector<PathCandidate> actions;
};

enum class FeatureMode { Flat, Graph };

struct FeatureParams {
  FeatureMode mode = FeatureMode::Flat;
  std::uint32_t depth = 1;               // graph aggregation rounds
  std::size_t max_path_elements = 10;    // flat mode pad/truncate length
  std::size_t indicator_len = 3;         // per-element indicator vector size
  double indicator_scale = 20.0;         // indicator normalizer
  double capacity_scale = 8.0;           // Table-1 maxima for the request block
  double bandwidth_scale = 10.0;
  double latency_scale = 3.0;
  double profit_scale = 15.0;
};

std::size_t feature_length(const FeatureParams& p);

// Flat: request block + per-element indicator dump along the path (padded).
// Graph: request block + readouts (PoA, mean host, mean path link) of
// mean-neighbor aggregated element embeddings. Both append a bias feature.
std::vector<double> encode_features(const SystemState& state, const Topology& t, const Request& r,
                                    const PathCandidate& action, const FeatureParams& params);

// Linear action-value function with online and target twins.
class QFunction {
 public:
  QFunction() = default;
  explicit QFunction(std::size_t dim) : online_(dim, 0.0), target_(dim, 0.0) {}

  double value(const std::vector<double>& features) const;
  double target_value(const std::vector<double>& features) const;
  std::size_t dim() const { return online_.size(); }
  std::uint64_t updates() const { return updates_; }

  std::vector<double>& online() { return online_; }
  const std::vector<double>& online() const { return online_; }
  const std::vector<double>& target() const { return target_; }
  void sync_target() { target_ = online_; }

  void save(std::ostream& out) const;
  static QFunction load(std::istream& in);

  friend double ddql_update(QFunction& q, const std::vector<struct Transition>& batch, double gamma,
                            double alpha, std::uint32_t target_sync);

 private:
  std::vector<double> online_;
  std::vector<double> target_;
  std::uint64_t updates_ = 0;
};

struct Transition {
  std::vector<double> features;  // encoded (state, action)
  double reward = 0.0;
  // Encoded features of every action available at the next decision; empty
  // together with terminal=true at episode end.
  std::vector<std::vector<double>> next_action_features;
  bool terminal = true;
};

// One gradient step toward the double-estimator targets: the online network
// picks argmax at the next state, the target network values it. Target
// weights copy from online every `target_sync` updates. Returns the mean
// squared TD error of the batch.
double ddql_update(QFunction& q, const std::vector<Transition>& batch, double gamma, double alpha,
                   std::uint32_t target_sync);

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}
  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::vector<Transition> sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

struct SelectionResult {
  std::size_t action_index = 0;             // into the feasible subset's origin set
  std::vector<std::size_t> feasible;        // indices that passed the mask
};

// Feasibility-masked selection. Returns nullopt (reject) when nothing is
// feasible; throws agent_error when the action set itself is empty.
std::optional<SelectionResult> select_action(PolicyKind policy,
                                             const std::vector<PathCandidate>& actions,
                                             const Request& r, const ResourceLedger& usage,
                                             const Topology& t, const InstanceCatalog& catalog,
                                             const SystemState& state, const QFunction* q,
                                             const FeatureParams& features, double epsilon,
                                             Rng& rng);

// Served: profit - lambda * marginal energy; rejected: 0; an accounting slip
// that violates QoS after application is penalized with -profit.
double compute_reward(const PlacementObjective& objective, bool served, int profit,
                      long long marginal_energy_units, bool qos_violation = false);

}  // namespace cnc
