#include "cnc/agents.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>

#include "cnc/errors.hpp"
#include "cnc/rng.hpp"

namespace cnc {

std::string policy_name(PolicyKind p) {
  switch (p) {
    case PolicyKind::Rnd: return "rnd";
    case PolicyKind::Greedy: return "greedy";
    case PolicyKind::Ddql: return "ddql";
    case PolicyKind::DdqlGnn: return "ddql-gnn";
    default: return "opt";
  }
}

PolicyKind parse_policy(const std::string& name) {
  if (name == "rnd") return PolicyKind::Rnd;
  if (name == "greedy") return PolicyKind::Greedy;
  if (name == "ddql") return PolicyKind::Ddql;
  if (name == "ddql-gnn") return PolicyKind::DdqlGnn;
  if (name == "opt") return PolicyKind::Opt;
  throw config_error("unknown policy '" + name + "'");
}

std::size_t feature_length(const FeatureParams& p) {
  const std::size_t request_block = 4;
  const std::size_t scalar_block = 4;
  const std::size_t bias = 1;
  if (p.mode == FeatureMode::Flat) {
    return request_block + scalar_block + p.max_path_elements * p.indicator_len + bias;
  }
  return request_block + scalar_block + 3 * p.indicator_len + bias;
}

namespace {

void append_scaled(std::vector<double>& out, const std::vector<double>& ind,
                   const FeatureParams& p) {
  for (std::size_t i = 0; i < p.indicator_len; ++i) {
    out.push_back(i < ind.size() ? ind[i] / p.indicator_scale : 0.0);
  }
}

}  // namespace

std::vector<double> encode_features(const SystemState& state, const Topology& t, const Request& r,
                                    const PathCandidate& action, const FeatureParams& params) {
  std::vector<double> out;
  out.reserve(feature_length(params));
  out.push_back(static_cast<double>(r.capacity_req) / params.capacity_scale);
  out.push_back(static_cast<double>(r.bandwidth_req) / params.bandwidth_scale);
  out.push_back(r.latency_budget_ms / params.latency_scale);
  out.push_back(static_cast<double>(r.profit) / params.profit_scale);

  out.push_back(r.latency_budget_ms > 0.0 ? action.latency_ms / r.latency_budget_ms : 0.0);
  out.push_back(static_cast<double>(action.hops.size()) /
                static_cast<double>(params.max_path_elements));
  out.push_back(std::isfinite(action.min_residual_bw) ? action.min_residual_bw / 300.0 : 0.0);
  out.push_back(static_cast<double>(action.hosts.size()) / 4.0);

  if (params.mode == FeatureMode::Flat) {
    // Raw positional dump of the path's element indicators.
    std::size_t emitted = 0;
    const auto emit = [&](const std::vector<double>& ind) {
      if (emitted >= params.max_path_elements) return;
      append_scaled(out, ind, params);
      ++emitted;
    };
    for (std::size_t i = 0; i < action.hops.size(); ++i) {
      emit(state.devices.at(action.hops[i]).indicators);
      if (i + 1 < action.hops.size()) {
        emit(state.links.at(*t.link_between(action.hops[i], action.hops[i + 1])).indicators);
      }
    }
    for (NodeId host : action.hosts) emit(state.nodes.at(host).indicators);
    for (; emitted < params.max_path_elements; ++emitted) {
      for (std::size_t i = 0; i < params.indicator_len; ++i) out.push_back(0.0);
    }
  } else {
    // Mean-neighbor aggregation over the element graph, then compact
    // readouts of the elements this action touches.
    const std::size_t d_count = state.devices.size();
    const std::size_t l_count = state.links.size();
    const std::size_t n_count = state.nodes.size();
    const std::size_t total = d_count + l_count + n_count;
    const std::size_t k = params.indicator_len;

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

    std::vector<std::vector<double>> h(total, std::vector<double>(k, 0.0));
    const auto scaled = [&](const std::vector<double>& ind) {
      std::vector<double> v(k, 0.0);
      for (std::size_t i = 0; i < k && i < ind.size(); ++i) v[i] = ind[i] / params.indicator_scale;
      return v;
    };
    for (std::size_t i = 0; i < d_count; ++i) h[dev(i)] = scaled(state.devices[i].indicators);
    for (std::size_t i = 0; i < l_count; ++i) h[lnk(i)] = scaled(state.links[i].indicators);
    for (std::size_t i = 0; i < n_count; ++i) h[nod(i)] = scaled(state.nodes[i].indicators);

    for (std::uint32_t round = 0; round < params.depth; ++round) {
      std::vector<std::vector<double>> next(total, std::vector<double>(k, 0.0));
      for (std::size_t v = 0; v < total; ++v) {
        if (adj[v].empty()) {
          next[v] = h[v];
          continue;
        }
        for (std::size_t i = 0; i < k; ++i) {
          double mean = 0.0;
          for (std::size_t u : adj[v]) mean += h[u][i];
          next[v][i] = 0.5 * h[v][i] + 0.5 * mean / static_cast<double>(adj[v].size());
        }
      }
      h = std::move(next);
    }

    // PoA readout.
    for (std::size_t i = 0; i < k; ++i) out.push_back(h[dev(r.user)][i]);
    // Mean host-node readout.
    for (std::size_t i = 0; i < k; ++i) {
      double sum = 0.0;
      for (NodeId host : action.hosts) sum += h[nod(host)][i];
      out.push_back(action.hosts.empty() ? 0.0 : sum / static_cast<double>(action.hosts.size()));
    }
    // Mean path-link readout.
    std::size_t links_on_path = 0;
    std::vector<double> link_sum(k, 0.0);
    for (std::size_t i = 0; i + 1 < action.hops.size(); ++i) {
      const LinkId l = *t.link_between(action.hops[i], action.hops[i + 1]);
      for (std::size_t j = 0; j < k; ++j) link_sum[j] += h[lnk(l)][j];
      ++links_on_path;
    }
    for (std::size_t j = 0; j < k; ++j) {
      out.push_back(links_on_path == 0 ? 0.0 : link_sum[j] / static_cast<double>(links_on_path));
    }
  }

  out.push_back(1.0);  // bias
  return out;
}

double QFunction::value(const std::vector<double>& features) const {
  if (features.size() != online_.size()) throw agent_error("feature dimension mismatch");
  double v = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) v += online_[i] * features[i];
  return v;
}

double QFunction::target_value(const std::vector<double>& features) const {
  if (features.size() != target_.size()) throw agent_error("feature dimension mismatch");
  double v = 0.0;
  for (std::size_t i = 0; i < features.size(); ++i) v += target_[i] * features[i];
  return v;
}

void QFunction::save(std::ostream& out) const {
  out << "# cncsim-agent v1\n";
  out << "dim " << online_.size() << " updates " << updates_ << "\n";
  out << std::setprecision(17);
  out << "online";
  for (double w : online_) out << " " << w;
  out << "\ntarget";
  for (double w : target_) out << " " << w;
  out << "\n";
}

QFunction QFunction::load(std::istream& in) {
  std::string line, tag;
  if (!std::getline(in, line) || line != "# cncsim-agent v1") {
    throw io_error("agent checkpoint: bad or missing header");
  }
  std::size_t dim = 0;
  std::uint64_t updates = 0;
  in >> tag >> dim;
  if (!in || tag != "dim") throw io_error("agent checkpoint: missing dim");
  in >> tag >> updates;
  if (!in || tag != "updates") throw io_error("agent checkpoint: missing updates");
  QFunction q(dim);
  q.updates_ = updates;
  in >> tag;
  if (tag != "online") throw io_error("agent checkpoint: missing online weights");
  for (auto& w : q.online_) in >> w;
  in >> tag;
  if (tag != "target") throw io_error("agent checkpoint: missing target weights");
  for (auto& w : q.target_) in >> w;
  if (!in) throw io_error("agent checkpoint: truncated weights");
  return q;
}

double ddql_update(QFunction& q, const std::vector<Transition>& batch, double gamma, double alpha,
                   std::uint32_t target_sync) {
  if (batch.empty()) throw agent_error("ddql_update: empty batch");
  std::vector<double> grad(q.online_.size(), 0.0);
  double sq_error = 0.0;
  for (const Transition& tr : batch) {
    for (double f : tr.features) {
      if (!std::isfinite(f)) throw agent_error("ddql_update: non-finite feature");
    }
    if (!std::isfinite(tr.reward)) throw agent_error("ddql_update: non-finite reward");
    double target = tr.reward;
    if (!tr.terminal && !tr.next_action_features.empty()) {
      std::size_t best = 0;
      double best_v = q.value(tr.next_action_features[0]);
      for (std::size_t a = 1; a < tr.next_action_features.size(); ++a) {
        const double v = q.value(tr.next_action_features[a]);
        if (v > best_v) {
          best_v = v;
          best = a;
        }
      }
      target += gamma * q.target_value(tr.next_action_features[best]);
    }
    const double td = target - q.value(tr.features);
    sq_error += td * td;
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += td * tr.features[i];
  }
  const double scale = alpha / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < q.online_.size(); ++i) q.online_[i] += scale * grad[i];
  ++q.updates_;
  if (target_sync > 0 && q.updates_ % target_sync == 0) q.sync_target();
  return sq_error / static_cast<double>(batch.size());
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[next_] = std::move(t);
    next_ = (next_ + 1) % capacity_;
  }
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  std::vector<Transition> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n && !items_.empty(); ++i) {
    out.push_back(items_[rng.pick_index(items_.size())]);
  }
  return out;
}

std::optional<SelectionResult> select_action(PolicyKind policy,
                                             const std::vector<PathCandidate>& actions,
                                             const Request& r, const ResourceLedger& usage,
                                             const Topology& t, const InstanceCatalog& catalog,
                                             const SystemState& state, const QFunction* q,
                                             const FeatureParams& features, double epsilon,
                                             Rng& rng) {
  if (actions.empty()) {
    throw agent_error("select_action: empty action set for service " + std::to_string(r.service));
  }
  SelectionResult res;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (check_feasibility(actions[i], r, usage, t, catalog).ok()) res.feasible.push_back(i);
  }
  if (res.feasible.empty()) return std::nullopt;

  switch (policy) {
    case PolicyKind::Rnd:
      res.action_index = res.feasible[rng.pick_index(res.feasible.size())];
      return res;
    case PolicyKind::Greedy: {
      std::size_t best = res.feasible[0];
      long long best_energy = std::numeric_limits<long long>::max();
      for (std::size_t i : res.feasible) {
        const long long e = link_energy_units(t, actions[i].hops, r.bandwidth_req) +
                            compute_energy_units(t, actions[i].hosts, r.capacity_req);
        if (e < best_energy) {
          best_energy = e;
          best = i;
        }
      }
      res.action_index = best;
      return res;
    }
    case PolicyKind::Ddql:
    case PolicyKind::DdqlGnn: {
      if (q == nullptr) throw agent_error("select_action: DDQL policy without a Q function");
      if (epsilon > 0.0 && rng.uniform01() < epsilon) {
        res.action_index = res.feasible[rng.pick_index(res.feasible.size())];
        return res;
      }
      std::size_t best = res.feasible[0];
      double best_v = -std::numeric_limits<double>::infinity();
      for (std::size_t i : res.feasible) {
        const double v = q->value(encode_features(state, t, r, actions[i], features));
        if (v > best_v) {
          best_v = v;
          best = i;
        }
      }
      res.action_index = best;
      return res;
    }
    default:
      throw agent_error("select_action: OPT is solved per slot, not per request");
  }
}

double compute_reward(const PlacementObjective& objective, bool served, int profit,
                      long long marginal_energy_units, bool qos_violation) {
  if (qos_violation) return -static_cast<double>(profit);
  if (!served) return 0.0;
  return static_cast<double>(profit) -
         objective.lambda.value() * static_cast<double>(marginal_energy_units);
}

}  // namespace cnc
