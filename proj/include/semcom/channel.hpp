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

// Physical level: a binary symmetric channel over payload bits plus a hard
// per-round byte budget. Headers travel error-free.

#pragma once

#include <cstdint>
#include <numeric>
#include <span>

#include "semcom/codec.hpp"
#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

namespace semcom {

struct ChannelConfig {
  std::size_t budget_bytes = 0;
  double bit_flip_prob = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(bit_flip_prob >= 0.0 && bit_flip_prob <= 1.0)) {
      throw DomainError("bit flip probability must be in [0,1]");
    }
  }
};

struct TransmitResult {
  EncodedPayload delivered;
  std::size_t bytes_used = 0;
  std::size_t flipped_bits = 0;
};

// Flips each payload bit independently with probability p, drawing from `rng`
// in payload order, most significant bit first.
inline TransmitResult transmit(const EncodedPayload& payload, const ChannelConfig& cfg, Rng& rng) {
  cfg.validate();
  TransmitResult result{payload, cost_bytes(payload), 0};
  if (cfg.bit_flip_prob == 0.0) return result;
  for (std::uint8_t& byte : result.delivered.payload) {
    for (int bit = 7; bit >= 0; --bit) {
      if (rng.bernoulli(cfg.bit_flip_prob)) {
        byte ^= static_cast<std::uint8_t>(1u << bit);
        ++result.flipped_bits;
      }
    }
  }
  return result;
}

struct BudgetCheck {
  bool feasible = true;
  std::size_t total = 0;
};

inline BudgetCheck budget_check(std::span<const std::size_t> costs, const ChannelConfig& cfg) {
  const std::size_t total = std::accumulate(costs.begin(), costs.end(), std::size_t{0});
  return {total <= cfg.budget_bytes, total};
}

}  // namespace semcom
