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

#ifndef AH_ACTOR_CRITIC_H_
#define AH_ACTOR_CRITIC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ah/rng.h"

namespace ah {

enum class OptimizerKind { kSgd, kRmsProp };

struct ActorCriticParams {
  double gamma = 0.99;
  double learning_rate = 0.0004;
  double entropy_weight = 0.003;
  double value_weight = 0.5;
  int hidden_size = 32;
  int segment_length = 100;
  OptimizerKind optimizer = OptimizerKind::kSgd;
  // RMSProp settings; unused by plain SGD.
  double rms_decay = 0.99;
  double rms_epsilon = 1e-5;
  // Global gradient-norm clip, 0 disables.
  double max_grad_norm = 0.0;

  bool operator==(const ActorCriticParams&) const = default;
};

// One time step of a segment. `advantage` and `target` are filled in by
// PrepareSegment and then treated as constants by the loss.
struct SegmentStep {
  std::vector<double> features;
  int action = 0;
  double reward = 0.0;
  double target = 0.0;
  double advantage = 0.0;
};

// tanh MLP with one hidden layer feeding a softmax policy head and a scalar
// value head. All weights live in one flat vector:
//   [W1 (H x D) | b1 (H) | Wp (A x H) | bp (A) | wv (H) | bv]
class ActorCritic {
 public:
  ActorCritic(int num_features, int num_actions, ActorCriticParams params,
              uint64_t seed);

  struct Output {
    std::vector<double> hidden;
    std::vector<double> policy;
    double value = 0.0;
  };
  Output Forward(std::span<const double> features) const;
  int Sample(std::span<const double> features, Rng& rng) const;

  // Fills n-step returns bootstrapped from `bootstrap_value` and advantages
  // from the current value estimates.
  void PrepareSegment(std::span<SegmentStep> segment,
                      double bootstrap_value) const;

  // Mean over the segment of
  //   -A log pi(a) - entropy_weight * H(pi) + value_weight/2 (R - V)^2.
  double Loss(std::span<const SegmentStep> segment) const;
  // Analytic gradient of Loss with respect to the flat parameters.
  std::vector<double> Gradient(std::span<const SegmentStep> segment) const;

  // Applies one optimizer step on the prepared segment.
  void Update(std::span<const SegmentStep> segment);

  int num_features() const { return num_features_; }
  int num_actions() const { return num_actions_; }
  const ActorCriticParams& params() const { return params_; }
  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& optimizer_state() const { return rms_; }
  std::vector<double>& optimizer_state() { return rms_; }
  int64_t updates() const { return updates_; }

 private:
  size_t W1(int h, int d) const { return static_cast<size_t>(h) * num_features_ + d; }
  size_t B1(int h) const { return b1_ + h; }
  size_t Wp(int a, int h) const { return wp_ + static_cast<size_t>(a) * hidden_ + h; }
  size_t Bp(int a) const { return bp_ + a; }
  size_t Wv(int h) const { return wv_ + h; }
  size_t Bv() const { return bv_; }

  int num_features_;
  int num_actions_;
  int hidden_;
  ActorCriticParams params_;
  size_t b1_, wp_, bp_, wv_, bv_;
  std::vector<double> weights_;
  std::vector<double> rms_;
  int64_t updates_ = 0;
};

}  // namespace ah

#endif  // AH_ACTOR_CRITIC_H_
