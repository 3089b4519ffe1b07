// Copyright 2026 The Allelopathic Harvest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AH_RNG_H_
#define AH_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ah {

// Platform-independent random source. The std distributions are
// implementation-defined, so every draw that affects a trajectory goes
// through the conversions below instead.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Rejection sampling keeps it unbiased.
  uint64_t UniformInt(uint64_t n);

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  bool operator==(const Rng&) const = default;

  const std::mt19937_64& engine() const { return engine_; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

uint64_t SplitMix64(uint64_t x);

// Counter-based expansion of a master seed. Each (master, episode, stream)
// triple yields an independent 64-bit seed:
//   SplitMix64(SplitMix64(SplitMix64(master) ^ episode) ^ stream)
uint64_t ExpandSeed(uint64_t master, uint64_t episode, uint64_t stream = 0);

// Stream tags for ExpandSeed.
inline constexpr uint64_t kEnvStream = 0;
inline constexpr uint64_t kAgentStream = 1;
inline constexpr uint64_t kPoolStream = 2;

}  // namespace ah

#endif  // AH_RNG_H_
