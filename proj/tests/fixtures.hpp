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

// Allocation instances shared by the allocator unit tests and the acceptance
// suite.

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "semcom/allocator.hpp"
#include "semcom/synthetic.hpp"

namespace semcom::fixture {

inline ExtractorKind random_extractor(Rng& rng) {
  switch (rng.index(3)) {
    case 0: return CannyParams{};
    case 1: return SobelMagnitude{};
    default: return QuantizeSegmentation{2 + static_cast<int>(rng.index(4))};
  }
}

inline MetricKind random_metric(Rng& rng) {
  switch (rng.index(4)) {
    case 0: return MseQuality{};
    case 1: return PsnrQuality{};
    case 2: return SsimQuality{};
    default: return ViQuality{};
  }
}

inline std::size_t cost_at(const AllocationInstance& inst, int d) {
  std::size_t total = 0;
  for (const auto& s : inst.services) total += cost_bytes(s.source.pixels.resolution(), d);
  return total;
}

// S in [1,3], |D| in [2,4], budget between the all-max(D) and all-min(D) costs.
inline AllocationInstance random_instance(Rng& rng) {
  AllocationInstance inst;
  std::vector<int> pool{1, 2, 3, 4, 5, 6, 8, 10};
  for (std::size_t i = pool.size() - 1; i > 0; --i) std::swap(pool[i], pool[rng.index(i + 1)]);
  inst.factors.assign(pool.begin(), pool.begin() + 2 + static_cast<long>(rng.index(3)));
  std::sort(inst.factors.begin(), inst.factors.end());
  const std::size_t services = 1 + rng.index(3);
  for (std::size_t s = 0; s < services; ++s) {
    AllocationService svc;
    svc.spec.id = "s" + std::to_string(s);
    svc.spec.extractor = random_extractor(rng);
    svc.spec.metric = random_metric(rng);
    svc.spec.weight = rng.uniform(0.5, 3.0);
    const int size = 16 + static_cast<int>(rng.index(17));
    svc.source = {"img" + std::to_string(s), synthetic::random_shapes(size, size, rng)};
    inst.services.push_back(std::move(svc));
  }
  const double lo = static_cast<double>(cost_at(inst, inst.factors.back()));
  const double hi = static_cast<double>(cost_at(inst, inst.factors.front()));
  inst.channel.budget_bytes = static_cast<std::size_t>(rng.uniform(lo, hi));
  inst.channel.seed = rng.next_u64();
  return inst;
}

// One scenario of four services with distinct extractor/metric pairs over
// D = {1,2,4,8,10} and 30% of the lossless byte cost.
inline AllocationInstance dqn_scenario() {
  const auto corpus = synthetic::degradation_corpus(32);
  struct Archetype {
    ExtractorKind extractor;
    MetricKind metric;
    std::size_t image;
  };
  const Archetype archetypes[] = {
      {CannyParams{}, MseQuality{}, 0},
      {SobelMagnitude{}, SsimQuality{}, 3},
      {QuantizeSegmentation{4}, ViQuality{4}, 7},
      {SobelMagnitude{}, PsnrQuality{}, 6},
  };
  AllocationInstance inst;
  inst.factors = {1, 2, 4, 8, 10};
  for (std::size_t s = 0; s < 4; ++s) {
    AllocationService svc;
    svc.spec.id = "service" + std::to_string(s + 1);
    svc.spec.extractor = archetypes[s].extractor;
    svc.spec.metric = archetypes[s].metric;
    svc.source = corpus[archetypes[s].image];
    inst.services.push_back(std::move(svc));
  }
  inst.channel.budget_bytes = static_cast<std::size_t>(0.3 * static_cast<double>(cost_at(inst, 1)));
  return inst;
}

}  // namespace semcom::fixture
