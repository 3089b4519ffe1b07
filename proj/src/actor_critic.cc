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

#include "ah/actor_critic.h"

#include <algorithm>
#include <cmath>

#include "ah/errors.h"

namespace ah {

ActorCritic::ActorCritic(int num_features, int num_actions,
                         ActorCriticParams params, uint64_t seed)
    : num_features_(num_features),
      num_actions_(num_actions),
      hidden_(params.hidden_size),
      params_(params) {
  if (num_features <= 0 || num_actions <= 0 || hidden_ <= 0) {
    throw InvalidArgument("actor-critic dimensions must be positive");
  }
  b1_ = static_cast<size_t>(hidden_) * num_features_;
  wp_ = b1_ + hidden_;
  bp_ = wp_ + static_cast<size_t>(num_actions_) * hidden_;
  wv_ = bp_ + num_actions_;
  bv_ = wv_ + hidden_;
  weights_.assign(bv_ + 1, 0.0);
  rms_.assign(weights_.size(), 0.0);

  // Uniform(-s, s) with s = 1/sqrt(fan_in); heads start small so the
  // initial policy is close to uniform.
  Rng rng(seed);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(num_features_));
  for (size_t i = 0; i < b1_; ++i) weights_[i] = s1 * (2 * rng.Uniform() - 1);
  const double s2 = 0.1 / std::sqrt(static_cast<double>(hidden_));
  for (int a = 0; a < num_actions_; ++a) {
    for (int h = 0; h < hidden_; ++h) {
      weights_[Wp(a, h)] = s2 * (2 * rng.Uniform() - 1);
    }
  }
  for (int h = 0; h < hidden_; ++h) {
    weights_[Wv(h)] = s2 * (2 * rng.Uniform() - 1);
  }
}

ActorCritic::Output ActorCritic::Forward(
    std::span<const double> features) const {
  Output out;
  out.hidden.resize(hidden_);
  for (int h = 0; h < hidden_; ++h) {
    double z = weights_[B1(h)];
    const double* row = &weights_[W1(h, 0)];
    for (int d = 0; d < num_features_; ++d) z += row[d] * features[d];
    out.hidden[h] = std::tanh(z);
  }
  out.policy.resize(num_actions_);
  double max_logit = -1e300;
  for (int a = 0; a < num_actions_; ++a) {
    double z = weights_[Bp(a)];
    for (int h = 0; h < hidden_; ++h) z += weights_[Wp(a, h)] * out.hidden[h];
    out.policy[a] = z;
    max_logit = std::max(max_logit, z);
  }
  double total = 0.0;
  for (double& p : out.policy) {
    p = std::exp(p - max_logit);
    total += p;
  }
  for (double& p : out.policy) p /= total;
  out.value = weights_[Bv()];
  for (int h = 0; h < hidden_; ++h) out.value += weights_[Wv(h)] * out.hidden[h];
  return out;
}

int ActorCritic::Sample(std::span<const double> features, Rng& rng) const {
  const Output out = Forward(features);
  const double u = rng.Uniform();
  double cumulative = 0.0;
  for (int a = 0; a < num_actions_; ++a) {
    cumulative += out.policy[a];
    if (u < cumulative) return a;
  }
  return num_actions_ - 1;
}

void ActorCritic::PrepareSegment(std::span<SegmentStep> segment,
                                 double bootstrap_value) const {
  double ret = bootstrap_value;
  for (size_t i = segment.size(); i-- > 0;) {
    ret = segment[i].reward + params_.gamma * ret;
    segment[i].target = ret;
    segment[i].advantage = ret - Forward(segment[i].features).value;
  }
}

double ActorCritic::Loss(std::span<const SegmentStep> segment) const {
  if (segment.empty()) return 0.0;
  double loss = 0.0;
  for (const SegmentStep& s : segment) {
    const Output out = Forward(s.features);
    double entropy = 0.0;
    for (double p : out.policy) {
      if (p > 0.0) entropy -= p * std::log(p);
    }
    const double err = s.target - out.value;
    loss += -s.advantage * std::log(out.policy[s.action]) -
            params_.entropy_weight * entropy +
            0.5 * params_.value_weight * err * err;
  }
  return loss / static_cast<double>(segment.size());
}

std::vector<double> ActorCritic::Gradient(
    std::span<const SegmentStep> segment) const {
  std::vector<double> grad(weights_.size(), 0.0);
  if (segment.empty()) return grad;
  const double scale = 1.0 / static_cast<double>(segment.size());
  std::vector<double> dlogits(num_actions_);
  std::vector<double> dhidden(hidden_);
  for (const SegmentStep& s : segment) {
    const Output out = Forward(s.features);
    double entropy = 0.0;
    for (double p : out.policy) {
      if (p > 0.0) entropy -= p * std::log(p);
    }
    for (int a = 0; a < num_actions_; ++a) {
      const double p = out.policy[a];
      const double onehot = a == s.action ? 1.0 : 0.0;
      const double log_p = p > 0.0 ? std::log(p) : 0.0;
      dlogits[a] = scale * (-s.advantage * (onehot - p) +
                            params_.entropy_weight * p * (log_p + entropy));
    }
    const double dvalue =
        scale * params_.value_weight * (out.value - s.target);

    std::fill(dhidden.begin(), dhidden.end(), 0.0);
    for (int a = 0; a < num_actions_; ++a) {
      grad[Bp(a)] += dlogits[a];
      for (int h = 0; h < hidden_; ++h) {
        grad[Wp(a, h)] += dlogits[a] * out.hidden[h];
        dhidden[h] += dlogits[a] * weights_[Wp(a, h)];
      }
    }
    grad[Bv()] += dvalue;
    for (int h = 0; h < hidden_; ++h) {
      grad[Wv(h)] += dvalue * out.hidden[h];
      dhidden[h] += dvalue * weights_[Wv(h)];
    }
    for (int h = 0; h < hidden_; ++h) {
      const double dz = dhidden[h] * (1.0 - out.hidden[h] * out.hidden[h]);
      if (dz == 0.0) continue;
      grad[B1(h)] += dz;
      double* row = &grad[W1(h, 0)];
      for (int d = 0; d < num_features_; ++d) row[d] += dz * s.features[d];
    }
  }
  return grad;
}

void ActorCritic::Update(std::span<const SegmentStep> segment) {
  std::vector<double> grad = Gradient(segment);
  if (params_.max_grad_norm > 0.0) {
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    norm = std::sqrt(norm);
    if (norm > params_.max_grad_norm) {
      const double k = params_.max_grad_norm / norm;
      for (double& g : grad) g *= k;
    }
  }
  const double lr = params_.learning_rate;
  if (params_.optimizer == OptimizerKind::kSgd) {
    for (size_t i = 0; i < grad.size(); ++i) weights_[i] -= lr * grad[i];
  } else {
    const double decay = params_.rms_decay;
    for (size_t i = 0; i < grad.size(); ++i) {
      rms_[i] = decay * rms_[i] + (1.0 - decay) * grad[i] * grad[i];
      weights_[i] -= lr * grad[i] / std::sqrt(rms_[i] + params_.rms_epsilon);
    }
  }
  ++updates_;
}

}  // namespace ah
