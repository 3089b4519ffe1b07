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

#include <cmath>
#include <numeric>
#include <vector>

#include "ah/actor_critic.h"
#include "ah/errors.h"
#include "ah/rng.h"
#include "doctest.h"
#include "generators.h"

namespace ah {
namespace {

std::vector<double> RandomFeatures(gen::Gen& g, int n) {
  std::vector<double> x(n);
  for (double& v : x) v = g.Real(-1.0, 1.0);
  return x;
}

TEST_CASE("forward pass gives a distribution over 12 actions") {
  gen::Gen g(1);
  for (int trial = 0; trial < 50; ++trial) {
    ActorCritic net(g.Int(1, 40), 12, {}, g.Seed());
    const auto out = net.Forward(RandomFeatures(g, net.num_features()));
    REQUIRE(out.policy.size() == 12);
    double sum = 0.0;
    for (double p : out.policy) {
      CHECK(p > 0.0);
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK(std::isfinite(out.value));
  }
  CHECK_THROWS_AS(ActorCritic(0, 12, {}, 1), InvalidArgument);
}

TEST_CASE("analytic gradient matches finite differences") {
  gen::Gen g(2);
  for (int trial = 0; trial < 5; ++trial) {
    ActorCriticParams p;
    p.hidden_size = 6;
    p.entropy_weight = 0.05;
    ActorCritic net(7, 12, p, g.Seed());
    std::vector<SegmentStep> segment(4);
    for (SegmentStep& s : segment) {
      s.features = RandomFeatures(g, 7);
      s.action = g.Int(0, 11);
      s.reward = g.Real(-1, 2);
    }
    net.PrepareSegment(segment, 0.3);
    const std::vector<double> analytic = net.Gradient(segment);
    REQUIRE(analytic.size() == net.weights().size());
    double worst = 0.0;
    for (size_t i = 0; i < analytic.size(); ++i) {
      const double saved = net.weights()[i];
      const double h = 1e-6;
      net.weights()[i] = saved + h;
      const double up = net.Loss(segment);
      net.weights()[i] = saved - h;
      const double down = net.Loss(segment);
      net.weights()[i] = saved;
      const double numeric = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(numeric - analytic[i]) /
                                  std::max(1.0, std::abs(numeric)));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("n-step targets") {
  ActorCriticParams p;
  p.gamma = 0.5;
  ActorCritic net(1, 12, p, 3);
  std::vector<SegmentStep> seg(3);
  for (SegmentStep& s : seg) s.features = {1.0};
  seg[0].reward = 1;
  seg[1].reward = 2;
  seg[2].reward = 4;
  net.PrepareSegment(seg, 8.0);
  CHECK(seg[2].target == 4 + 0.5 * 8);
  CHECK(seg[1].target == 2 + 0.5 * 8);
  CHECK(seg[0].target == 1 + 0.5 * 6);
  const double v = net.Forward(seg[0].features).value;
  CHECK(seg[0].advantage == doctest::Approx(4 - v));
}

// Trains the critic on an endless constant-reward stream from one state.
double TrainValue(double reward, OptimizerKind optimizer) {
  ActorCriticParams p;
  p.optimizer = optimizer;
  p.learning_rate = optimizer == OptimizerKind::kSgd ? 0.02 : 0.003;
  p.hidden_size = 8;
  ActorCritic net(2, 12, p, 4);
  const std::vector<double> x = {1.0, 0.5};
  for (int it = 0; it < 20000; ++it) {
    std::vector<SegmentStep> seg(20);
    for (SegmentStep& s : seg) {
      s.features = x;
      s.reward = reward;
    }
    net.PrepareSegment(seg, net.Forward(x).value);
    net.Update(seg);
  }
  return net.Forward(x).value;
}

TEST_CASE("value converges to the discounted return") {
  for (OptimizerKind o : {OptimizerKind::kSgd, OptimizerKind::kRmsProp}) {
    CHECK(std::abs(TrainValue(0.0, o)) < 0.02);
    CHECK(TrainValue(0.03, o) == doctest::Approx(100 * 0.03).epsilon(0.02));
  }
}

TEST_CASE("policy learns a one-step bandit") {
  ActorCriticParams p;
  p.learning_rate = 0.05;
  p.hidden_size = 8;
  ActorCritic net(1, 12, p, 6);
  Rng rng(7);
  const std::vector<double> x = {1.0};
  for (int it = 0; it < 5000; ++it) {
    std::vector<SegmentStep> seg(1);
    seg[0].features = x;
    seg[0].action = net.Sample(x, rng);
    seg[0].reward = seg[0].action == 3 ? 1.0 : 0.0;
    net.PrepareSegment(seg, 0.0);
    net.Update(seg);
  }
  CHECK(net.Forward(x).policy[3] > 0.99);
  CHECK(net.updates() == 5000);
}

TEST_CASE("gradient clipping bounds the step") {
  ActorCriticParams p;
  p.max_grad_norm = 1e-3;
  p.learning_rate = 1.0;
  ActorCritic net(3, 12, p, 8);
  std::vector<SegmentStep> seg(2);
  for (SegmentStep& s : seg) {
    s.features = {1, -1, 2};
    s.reward = 50;
  }
  net.PrepareSegment(seg, 0.0);
  const std::vector<double> before = net.weights();
  net.Update(seg);
  double norm = 0.0;
  for (size_t i = 0; i < before.size(); ++i) {
    norm += (net.weights()[i] - before[i]) * (net.weights()[i] - before[i]);
  }
  CHECK(std::sqrt(norm) <= 1e-3 + 1e-12);
  CHECK(std::sqrt(norm) > 0.0);
}

}  // namespace
}  // namespace ah
