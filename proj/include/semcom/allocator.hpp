// Copyright 2026 The semcom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Joint allocation of per-service downscaling factors under a shared byte
// budget. A joint action assigns one factor from D to every service; the
// reward is the weighted mean quality when the payloads fit the budget and -1
// otherwise. Solvers: exhaustive enumeration (ground truth), a greedy
// marginal-utility heuristic, uniform random, and a single-step DQN.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "semcom/channel.hpp"
#include "semcom/errors.hpp"
#include "semcom/generation.hpp"
#include "semcom/mlp.hpp"
#include "semcom/rng.hpp"

namespace semcom {

inline constexpr std::size_t kMaxJointActions = 4096;
inline constexpr double kInfeasibleReward = -1.0;

struct AllocationService {
  ServiceSpec spec;
  SourceImage source;
};

struct AllocationInstance {
  std::vector<AllocationService> services;
  std::vector<int> factors;  // admissible set D, strictly increasing
  ChannelConfig channel;

  // |D|^S, saturating at SIZE_MAX.
  std::size_t joint_actions() const {
    std::size_t n = 1;
    for (std::size_t s = 0; s < services.size(); ++s) {
      if (n > std::numeric_limits<std::size_t>::max() / std::max<std::size_t>(1, factors.size())) {
        return std::numeric_limits<std::size_t>::max();
      }
      n *= factors.size();
    }
    return n;
  }

  void validate() const {
    if (services.empty()) throw DomainError("allocation instance has no services");
    detail::require_sorted_factors(factors);
    channel.validate();
    for (const auto& s : services) s.spec.validate();
  }

  void require_enumerable() const {
    const std::size_t n = joint_actions();
    if (n > kMaxJointActions) {
      throw TooLargeError("joint action space |D|^S = " +
                          (n == std::numeric_limits<std::size_t>::max() ? std::string("overflow")
                                                                         : std::to_string(n)) +
                          " exceeds the limit of " + std::to_string(kMaxJointActions));
    }
  }
};

struct AllocationAction {
  std::vector<int> factors;  // one per service
  friend bool operator==(const AllocationAction&, const AllocationAction&) = default;
};

inline std::string to_string(const AllocationAction& a) {
  std::string out;
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(a.factors[i]);
  }
  return out;
}

// Mixed-radix bijection between D^S and [0, |D|^S). Service 0 is the most
// significant digit, so index order equals lexicographic order of the factor
// tuples.
class ActionCodec {
 public:
  ActionCodec(std::vector<int> factors, std::size_t services)
      : factors_(std::move(factors)), services_(services) {
    detail::require_sorted_factors(factors_);
    size_ = 1;
    for (std::size_t s = 0; s < services_; ++s) size_ *= factors_.size();
  }

  std::size_t size() const { return size_; }
  std::size_t services() const { return services_; }
  const std::vector<int>& factors() const { return factors_; }

  AllocationAction decode(std::size_t index) const {
    if (index >= size_) throw DomainError("action index out of range");
    AllocationAction a;
    a.factors.assign(services_, 0);
    for (std::size_t s = services_; s-- > 0;) {
      a.factors[s] = factors_[index % factors_.size()];
      index /= factors_.size();
    }
    return a;
  }

  std::size_t encode(const AllocationAction& a) const {
    if (a.factors.size() != services_) throw ShapeError("action length does not match service count");
    std::size_t index = 0;
    for (int f : a.factors) {
      const auto it = std::find(factors_.begin(), factors_.end(), f);
      if (it == factors_.end()) throw DomainError("factor " + std::to_string(f) + " not in D");
      index = index * factors_.size() + static_cast<std::size_t>(it - factors_.begin());
    }
    return index;
  }

 private:
  std::vector<int> factors_;
  std::size_t services_;
  std::size_t size_ = 1;
};

struct QualityReport {
  std::string service;
  int factor = 1;
  double quality = 0.0;
  std::size_t bytes = 0;
};

struct ActionOutcome {
  double reward = kInfeasibleReward;
  bool feasible = false;
  std::size_t total_bytes = 0;
  double loss = 1.0;  // weighted mean of 1 - q
  std::vector<QualityReport> per_service;
};

// Evaluates joint actions on one instance. Costs and the qualities of
// deterministic services are memoized per (service, factor).
class InstanceEvaluator {
 public:
  InstanceEvaluator(const AllocationInstance& inst, const GenerationBackend& backend)
      : inst_(inst) {
    inst_.validate();
    for (const auto& s : inst_.services) probes_.emplace_back(s.spec, s.source, backend);
    quality_cache_.assign(probes_.size(), std::vector<std::optional<double>>(inst_.factors.size()));
    for (const auto& s : inst_.services) weight_sum_ += s.spec.weight;
  }

  const AllocationInstance& instance() const { return inst_; }
  const ServiceProbe& probe(std::size_t s) const { return probes_[s]; }

  std::size_t cost(std::size_t s, int d) const { return probes_[s].cost(d); }

  double quality(std::size_t s, int d, Rng& rng) {
    const std::size_t k = factor_index(d);
    if (!probes_[s].deterministic()) return probes_[s].quality(d, rng).value();
    auto& slot = quality_cache_[s][k];
    if (!slot) slot = probes_[s].quality(d, rng).value();
    return *slot;
  }

  ActionOutcome evaluate(const AllocationAction& a, Rng& rng) {
    if (a.factors.size() != probes_.size()) throw ShapeError("action length does not match service count");
    ActionOutcome out;
    std::vector<std::size_t> costs;
    double weighted_q = 0.0;
    for (std::size_t s = 0; s < probes_.size(); ++s) {
      const int d = a.factors[s];
      QualityReport r{inst_.services[s].spec.id, d, quality(s, d, rng), cost(s, d)};
      costs.push_back(r.bytes);
      weighted_q += inst_.services[s].spec.weight * r.quality;
      out.per_service.push_back(std::move(r));
    }
    const auto check = budget_check(costs, inst_.channel);
    out.feasible = check.feasible;
    out.total_bytes = check.total;
    const double mean_q = weighted_q / weight_sum_;
    out.loss = 1.0 - mean_q;
    out.reward = check.feasible ? mean_q : kInfeasibleReward;
    return out;
  }

  double weight_sum() const { return weight_sum_; }

 private:
  std::size_t factor_index(int d) const {
    const auto it = std::find(inst_.factors.begin(), inst_.factors.end(), d);
    if (it == inst_.factors.end()) throw DomainError("factor " + std::to_string(d) + " not in D");
    return static_cast<std::size_t>(it - inst_.factors.begin());
  }

  AllocationInstance inst_;
  std::vector<ServiceProbe> probes_;
  std::vector<std::vector<std::optional<double>>> quality_cache_;
  double weight_sum_ = 0.0;
};

inline ActionOutcome evaluate_action(const AllocationInstance& inst, const AllocationAction& a,
                                     const GenerationBackend& backend, Rng& rng) {
  return InstanceEvaluator(inst, backend).evaluate(a, rng);
}

struct AllocationResult {
  AllocationAction action;
  double reward = kInfeasibleReward;
  ActionOutcome outcome;
};

// Enumerates D^S in index order; ties keep the earliest (lexicographically
// smallest) tuple.
inline AllocationResult exhaustive_oracle(InstanceEvaluator& eval, Rng& rng) {
  const auto& inst = eval.instance();
  inst.require_enumerable();
  const ActionCodec codec(inst.factors, inst.services.size());
  AllocationResult best;
  bool have = false;
  for (std::size_t i = 0; i < codec.size(); ++i) {
    AllocationAction a = codec.decode(i);
    ActionOutcome o = eval.evaluate(a, rng);
    if (!have || o.reward > best.reward) {
      best = {std::move(a), o.reward, std::move(o)};
      have = true;
    }
  }
  return best;
}

inline AllocationResult exhaustive_oracle(const AllocationInstance& inst,
                                          const GenerationBackend& backend, Rng& rng) {
  inst.require_enumerable();
  InstanceEvaluator eval(inst, backend);
  return exhaustive_oracle(eval, rng);
}

// Starts every service at max(D) and repeatedly applies the single-service
// step down in D with the best weighted quality gain per extra byte that
// stays within budget, until no feasible improving step remains.
inline AllocationResult greedy_allocate(InstanceEvaluator& eval, Rng& rng) {
  const auto& inst = eval.instance();
  const auto& D = inst.factors;
  const std::size_t S = inst.services.size();
  std::vector<std::size_t> pos(S, D.size() - 1);
  auto action_of = [&] {
    AllocationAction a;
    for (std::size_t p : pos) a.factors.push_back(D[p]);
    return a;
  };
  std::size_t total = 0;
  for (std::size_t s = 0; s < S; ++s) total += eval.cost(s, D.back());
  if (total <= inst.channel.budget_bytes) {
    while (true) {
      std::optional<std::size_t> pick;
      double best_ratio = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        if (pos[s] == 0) continue;
        const int cur = D[pos[s]], next = D[pos[s] - 1];
        const std::size_t extra = eval.cost(s, next) - eval.cost(s, cur);
        if (total + extra > inst.channel.budget_bytes) continue;
        const double gain = inst.services[s].spec.weight *
                            (eval.quality(s, next, rng) - eval.quality(s, cur, rng)) /
                            eval.weight_sum();
        if (!(gain > 0.0)) continue;
        const double ratio = extra == 0 ? std::numeric_limits<double>::infinity()
                                        : gain / static_cast<double>(extra);
        if (!pick || ratio > best_ratio) {
          pick = s;
          best_ratio = ratio;
        }
      }
      if (!pick) break;
      total += eval.cost(*pick, D[pos[*pick] - 1]) - eval.cost(*pick, D[pos[*pick]]);
      --pos[*pick];
    }
  }
  AllocationAction a = action_of();
  ActionOutcome o = eval.evaluate(a, rng);
  return {std::move(a), o.reward, std::move(o)};
}

inline AllocationResult greedy_allocate(const AllocationInstance& inst,
                                        const GenerationBackend& backend, Rng& rng) {
  InstanceEvaluator eval(inst, backend);
  return greedy_allocate(eval, rng);
}

// One joint action drawn uniformly from D^S.
inline AllocationResult random_allocate(InstanceEvaluator& eval, Rng& rng) {
  const auto& inst = eval.instance();
  AllocationAction a;
  for (std::size_t s = 0; s < inst.services.size(); ++s) {
    a.factors.push_back(inst.factors[rng.index(inst.factors.size())]);
  }
  ActionOutcome o = eval.evaluate(a, rng);
  return {std::move(a), o.reward, std::move(o)};
}

inline AllocationResult random_allocate(const AllocationInstance& inst,
                                        const GenerationBackend& backend, Rng& rng) {
  InstanceEvaluator eval(inst, backend);
  return random_allocate(eval, rng);
}

// ---------------------------------------------------------------------------
// State features

// Per service: mean and variance of its semantic map and W*H relative to the
// largest map in the instance; then the budget relative to the cost of
// sending every map at min(D). Dimension 3S + 1, entries in [0,1].
inline std::vector<double> state_vector(const InstanceEvaluator& eval) {
  const auto& inst = eval.instance();
  std::size_t max_area = 1;
  std::size_t full_cost = 0;
  for (std::size_t s = 0; s < inst.services.size(); ++s) {
    max_area = std::max(max_area, eval.probe(s).semantic().resolution().area());
    full_cost += eval.cost(s, inst.factors.front());
  }
  std::vector<double> state;
  state.reserve(3 * inst.services.size() + 1);
  for (std::size_t s = 0; s < inst.services.size(); ++s) {
    const SemanticMap& m = eval.probe(s).semantic();
    state.push_back(std::clamp(m.mean(), 0.0, 1.0));
    state.push_back(std::clamp(m.variance(), 0.0, 1.0));
    state.push_back(static_cast<double>(m.resolution().area()) / static_cast<double>(max_area));
  }
  state.push_back(std::min(1.0, static_cast<double>(inst.channel.budget_bytes) /
                                    static_cast<double>(std::max<std::size_t>(1, full_cost))));
  return state;
}

// ---------------------------------------------------------------------------
// DQN

struct DqnConfig {
  std::vector<int> hidden{64, 64};
  std::size_t buffer_capacity = 4096;
  double epsilon_start = 1.0;
  double epsilon_min = 0.05;
  double decay_fraction = 0.8;  // share of episodes over which epsilon decays
  double gamma = 0.0;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  std::size_t batch = 32;
  std::size_t target_sync = 50;  // gradient steps between target-network syncs
  std::size_t warmup = 64;       // transitions stored before learning starts
  std::uint64_t seed = 0;

  void validate() const {
    if (!(epsilon_min >= 0.0 && epsilon_min <= epsilon_start && epsilon_start <= 1.0)) {
      throw DomainError("epsilon schedule needs 0 <= min <= start <= 1");
    }
    if (!(decay_fraction > 0.0 && decay_fraction <= 1.0)) throw DomainError("decay fraction must be in (0,1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must be in [0,1]");
    if (!(learning_rate > 0.0)) throw DomainError("learning rate must be > 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw DomainError("momentum must be in [0,1)");
    if (batch < 1 || buffer_capacity < 1 || target_sync < 1) {
      throw DomainError("batch, buffer and sync interval must be >= 1");
    }
    for (int h : hidden) {
      if (h < 1) throw DomainError("hidden layer sizes must be >= 1");
    }
  }
};

// Multiplicative decay from epsilon_start to epsilon_min over the first
// decay_fraction of the episodes, then flat.
inline double epsilon_at(std::size_t episode, std::size_t episodes, const DqnConfig& cfg) {
  const double horizon = std::max(1.0, cfg.decay_fraction * static_cast<double>(episodes));
  if (static_cast<double>(episode) >= horizon || cfg.epsilon_start <= 0.0) return cfg.epsilon_min;
  if (cfg.epsilon_min <= 0.0) {
    // Pure multiplicative decay cannot reach 0; decay linearly instead.
    return cfg.epsilon_start * (1.0 - static_cast<double>(episode) / horizon);
  }
  const double ratio = cfg.epsilon_min / cfg.epsilon_start;
  return std::max(cfg.epsilon_min,
                  cfg.epsilon_start * std::pow(ratio, static_cast<double>(episode) / horizon));
}

struct Transition {
  std::vector<double> state;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = true;
};

// Fixed-capacity ring buffer with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) { items_.reserve(capacity); }

  void push(Transition t) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(t));
    } else {
      items_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }

  std::vector<const Transition*> sample(std::size_t n, Rng& rng) const {
    std::vector<const Transition*> out;
    if (items_.empty()) return out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(&items_[rng.index(items_.size())]);
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

class DqnAgent {
 public:
  DqnAgent(ActionCodec codec, Mlp network) : codec_(std::move(codec)), online_(std::move(network)) {
    if (static_cast<std::size_t>(online_.output_size()) != codec_.size()) {
      throw ShapeError("network output size does not match the joint action count");
    }
    if (static_cast<std::size_t>(online_.input_size()) != 3 * codec_.services() + 1) {
      throw ShapeError("network input size does not match the state dimension 3S+1");
    }
  }

  static DqnAgent create(const ActionCodec& codec, const DqnConfig& cfg, Rng& rng) {
    std::vector<int> sizes{static_cast<int>(3 * codec.services() + 1)};
    sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    sizes.push_back(static_cast<int>(codec.size()));
    return DqnAgent(codec, Mlp::random(sizes, rng));
  }

  const ActionCodec& codec() const { return codec_; }
  const Mlp& network() const { return online_; }
  Mlp& network() { return online_; }

  std::vector<double> q_values(std::span<const double> state) const { return online_.forward(state); }

  // argmax Q; ties resolve to the smallest index.
  std::size_t best_index(std::span<const double> state) const {
    const auto q = q_values(state);
    return static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
  }

  AllocationAction act(std::span<const double> state) const { return codec_.decode(best_index(state)); }

 private:
  ActionCodec codec_;
  Mlp online_;
};

inline AllocationAction dqn_act(const DqnAgent& agent, std::span<const double> state) {
  return agent.act(state);
}

struct EpisodeRecord {
  std::size_t episode = 0;
  std::size_t instance = 0;
  double epsilon = 0.0;
  std::size_t action_index = 0;
  double reward = 0.0;         // reward of the behaviour (epsilon-greedy) action
  double loss = 0.0;           // weighted quality loss of that action
  double greedy_reward = 0.0;  // reward of the current greedy action on the same instance
  double td_loss = 0.0;        // mini-batch TD loss of this episode's update, 0 before warmup
};

struct TrainingResult {
  DqnAgent agent;
  std::vector<EpisodeRecord> trace;
};

// Single-step episodes: each episode draws an instance, acts epsilon-greedily
// over the joint action space, stores the transition (done = true) and, after
// warmup, takes one momentum-SGD step on a replay mini-batch. The target
// network is re-synced every cfg.target_sync gradient steps.
inline TrainingResult dqn_train(std::span<const AllocationInstance> pool, std::size_t episodes,
                                const DqnConfig& cfg, const GenerationBackend& backend) {
  cfg.validate();
  if (pool.empty()) throw DomainError("training pool is empty");
  for (const auto& inst : pool) {
    inst.require_enumerable();
    if (inst.services.size() != pool.front().services.size() ||
        inst.factors != pool.front().factors) {
      throw DomainError("pool instances must share the service count and factor set");
    }
  }
  Rng rng = Rng::stream(cfg.seed, "dqn");
  Rng gen_rng = Rng::stream(cfg.seed, "gen");

  std::vector<InstanceEvaluator> evaluators;
  std::vector<std::vector<double>> states;
  for (const auto& inst : pool) {
    evaluators.emplace_back(inst, backend);
    states.push_back(state_vector(evaluators.back()));
  }
  const ActionCodec codec(pool.front().factors, pool.front().services.size());
  DqnAgent agent = DqnAgent::create(codec, cfg, rng);
  Mlp target = agent.network();
  MomentumSgd opt(cfg.learning_rate, cfg.momentum);
  ReplayBuffer replay(cfg.buffer_capacity);
  std::size_t gradient_steps = 0;

  std::vector<EpisodeRecord> trace;
  trace.reserve(episodes);
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    EpisodeRecord rec;
    rec.episode = ep;
    rec.instance = rng.index(pool.size());
    rec.epsilon = epsilon_at(ep, episodes, cfg);
    const auto& state = states[rec.instance];
    rec.action_index = rng.bernoulli(rec.epsilon) ? rng.index(codec.size()) : agent.best_index(state);

    const ActionOutcome outcome = evaluators[rec.instance].evaluate(codec.decode(rec.action_index), gen_rng);
    rec.reward = outcome.reward;
    rec.loss = outcome.loss;
    replay.push({state, rec.action_index, outcome.reward, state, true});

    if (replay.size() >= std::max(cfg.warmup, std::size_t{1})) {
      const auto batch = replay.sample(cfg.batch, rng);
      std::vector<TdSample> samples;
      samples.reserve(batch.size());
      for (const Transition* t : batch) {
        double y = t->reward;
        if (!t->done && cfg.gamma > 0.0) {
          const auto next_q = target.forward(t->next_state);
          y += cfg.gamma * *std::max_element(next_q.begin(), next_q.end());
        }
        samples.push_back({t->state, t->action, y});
      }
      MlpGradients grads;
      rec.td_loss = td_loss(agent.network(), samples, &grads);
      opt.step(agent.network(), grads);
      if (++gradient_steps % cfg.target_sync == 0) target = agent.network();
    }

    rec.greedy_reward = evaluators[rec.instance].evaluate(agent.act(state), gen_rng).reward;
    trace.push_back(rec);
  }
  return {std::move(agent), std::move(trace)};
}

// CSV: episode,epsilon,reward,loss,action_index,greedy_reward,td_loss
inline void write_training_csv(std::ostream& out, std::span<const EpisodeRecord> trace) {
  out << "episode,epsilon,reward,loss,action_index,greedy_reward,td_loss\n";
  for (const auto& r : trace) {
    out << r.episode << ',' << format_number(r.epsilon) << ',' << format_number(r.reward) << ','
        << format_number(r.loss) << ',' << r.action_index << ',' << format_number(r.greedy_reward)
        << ',' << format_number(r.td_loss) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Checkpoint: "DQN1", u32 layer-size count n, n x u32 sizes, then for each
// layer its weights (row-major, outputs x inputs) followed by its biases, all
// little-endian IEEE-754 binary64.

namespace detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& b) : b_(b) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_++]) << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  bool at_end() const { return pos_ == b_.size(); }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw TruncatedError("checkpoint truncated");
  }
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 4;
};

}  // namespace detail

inline std::vector<std::uint8_t> serialize_network(const Mlp& net) {
  std::vector<std::uint8_t> out{'D', 'Q', 'N', '1'};
  const auto sizes = net.sizes();
  detail::put_u32(out, static_cast<std::uint32_t>(sizes.size()));
  for (int s : sizes) detail::put_u32(out, static_cast<std::uint32_t>(s));
  for (const auto& l : net.layers()) {
    for (double w : l.weights) detail::put_f64(out, w);
    for (double b : l.biases) detail::put_f64(out, b);
  }
  return out;
}

inline Mlp parse_network(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "DQN1", 4) != 0) {
    throw ParseError("checkpoint magic is not DQN1", 0);
  }
  detail::ByteReader r(bytes);
  const std::uint32_t n = r.u32();
  if (n < 2 || n > 64) throw ParseError("checkpoint layer count out of range", 4);
  std::vector<int> sizes;
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t s = r.u32();
    if (s < 1 || s > (1u << 20)) throw ParseError("checkpoint layer size out of range", 8 + 4 * i);
    sizes.push_back(static_cast<int>(s));
  }
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    DenseLayer l(sizes[i], sizes[i + 1]);
    for (double& w : l.weights) w = r.f64();
    for (double& b : l.biases) b = r.f64();
    layers.push_back(std::move(l));
  }
  if (!r.at_end()) throw ParseError("trailing bytes after checkpoint", bytes.size());
  return Mlp(std::move(layers));
}

inline void save_checkpoint(const DqnAgent& agent, const std::filesystem::path& path) {
  write_bytes(path, serialize_network(agent.network()));
}

inline DqnAgent load_checkpoint(const std::filesystem::path& path, const ActionCodec& codec) {
  return DqnAgent(codec, parse_network(detail::read_all(path)));
}

}  // namespace semcom
