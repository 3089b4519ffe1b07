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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ah/agents.h"
#include "ah/errors.h"
#include "ah/observation.h"
#include "doctest.h"
#include "scenario.h"

namespace ah {
namespace {

using testing::ClearWorld;
using testing::PutBerry;
using testing::PutPlayer;

// One player at (5, 8) facing north on an empty 12x12 map.
struct View {
  EnvConfig config = testing::SmallConfig(1, 0, 100);
  EnvState state;

  View() {
    config.initial_color_counts.assign(5, 0);
    state = CreateState(config);
    ClearWorld(state);
    PutPlayer(state, 0, {5, 8}, Orientation::kNorth);
  }
  Observation Render() const {
    return RenderObservation(config, state, 0, ObservationMode::kSymbolic);
  }
};

std::unique_ptr<Agent> Make(AgentKind kind, std::optional<int> target = {},
                            int budget = -1, uint64_t seed = 1) {
  AgentSpec spec;
  spec.kind = kind;
  spec.profile = RewardProfile::Preferring(0, 5);
  spec.target_color = target;
  spec.plant_budget = budget;
  return MakeAgent(spec, AgentContext{}, seed);
}

TEST_CASE("free rider walks to the nearest ripe berry") {
  View v;
  PutBerry(v.state, {5, 6}, 3, true);
  auto agent = Make(AgentKind::kFreeRider);
  CHECK(agent->Act(v.Render(), 0) == Action::kMoveForward);

  View right;
  PutBerry(right.state, {7, 8}, 1, true);
  PutBerry(right.state, {5, 4}, 1, true);
  CHECK(agent->Act(right.Render(), 0) == Action::kStrafeRight);

  View behind;
  PutBerry(behind.state, {5, 9}, 1, true);
  CHECK(agent->Act(behind.Render(), 0) == Action::kMoveBackward);

  // Unripe berries are ignored and the walk never plants or zaps.
  View unripe;
  PutBerry(unripe.state, {5, 7}, 1, false);
  for (int i = 0; i < 200; ++i) {
    const Action a = agent->Act(unripe.Render(), 0);
    CHECK(static_cast<int>(a) < kFirstPlantAction);
  }
}

TEST_CASE("taste-seeker plants its color on unripe berries in the beam") {
  View v;
  PutBerry(v.state, {5, 6}, 0, false);
  auto seeker = Make(AgentKind::kTasteSeeker, 2);
  CHECK(seeker->Act(v.Render(), 0) == PlantAction(2));

  // Its own color is not a target.
  View own;
  PutBerry(own.state, {5, 6}, 2, false);
  CHECK(seeker->Act(own.Render(), 0) != PlantAction(2));

  // A target within beam range to the east: turn toward it.
  View east;
  PutBerry(east.state, {7, 8}, 4, false);
  CHECK(seeker->Act(east.Render(), 0) == Action::kTurnRight);
  View west;
  PutBerry(west.state, {3, 8}, 4, false);
  CHECK(seeker->Act(west.Render(), 0) == Action::kTurnLeft);

  // A ripe berry of its color comes first.
  View both;
  PutBerry(both.state, {5, 6}, 0, false);
  PutBerry(both.state, {4, 8}, 2, true);
  CHECK(seeker->Act(both.Render(), 0) == Action::kStrafeLeft);

  // Without a target color the profile's preferred color is used.
  auto default_seeker = Make(AgentKind::kTasteSeeker);
  View other;
  PutBerry(other.state, {5, 7}, 3, false);
  CHECK(default_seeker->Act(other.Render(), 0) == PlantAction(0));
}

TEST_CASE("plant budget") {
  View v;
  PutBerry(v.state, {5, 6}, 0, false);
  auto seeker = Make(AgentKind::kTasteSeeker, 2, 2);
  const Observation obs = v.Render();
  Transition t{&obs, PlantAction(2), 0.0, &obs, false, 0, 1};
  CHECK(seeker->Act(obs, 0) == PlantAction(2));
  seeker->Observe(t, 0);
  CHECK(seeker->Act(obs, 0) == PlantAction(2));
  t.step = 1;
  seeker->Observe(t, 0);
  CHECK(seeker->Act(obs, 0) != PlantAction(2));
  seeker->BeginEpisode(3);
  CHECK(seeker->Act(obs, 0) == PlantAction(2));
}

TEST_CASE("conventionist plants the locally dominant color") {
  View v;
  PutBerry(v.state, {2, 2}, 3, true);
  PutBerry(v.state, {3, 2}, 3, true);
  PutBerry(v.state, {8, 2}, 3, false);
  PutBerry(v.state, {5, 6}, 1, false);
  auto conventionist = Make(AgentKind::kConventionist);
  CHECK(conventionist->Act(v.Render(), 0) == PlantAction(3));
}

TEST_CASE("inert agent only turns") {
  View v;
  PutBerry(v.state, {5, 7}, 0, true);
  auto inert = Make(AgentKind::kInert);
  const Action a = inert->Act(v.Render(), 0);
  CHECK((a == Action::kTurnLeft || a == Action::kTurnRight));
}

TEST_CASE("random agent is uniform over the 12 actions") {
  View v;
  auto agent = Make(AgentKind::kRandom, {}, -1, 2024);
  const Observation obs = v.Render();
  std::vector<int> histogram(12, 0);
  for (int i = 0; i < 12000; ++i) {
    const int a = static_cast<int>(agent->Act(obs, 0));
    REQUIRE(a >= 0);
    REQUIRE(a < 12);
    ++histogram[a];
  }
  for (int count : histogram) {
    CHECK(count >= 880);
    CHECK(count <= 1120);
  }
}

TEST_CASE("agents are deterministic given their seed") {
  View v;
  PutBerry(v.state, {5, 7}, 0, false);
  const Observation obs = v.Render();
  for (AgentKind kind : {AgentKind::kRandom, AgentKind::kFreeRider,
                         AgentKind::kTasteSeeker, AgentKind::kLearner}) {
    auto a = Make(kind, {}, -1, 55);
    auto b = Make(kind, {}, -1, 55);
    std::vector<Action> first;
    for (int i = 0; i < 100; ++i) {
      first.push_back(a->Act(obs, 0));
      CHECK(first.back() == b->Act(obs, 0));
    }
    a->BeginEpisode(9);
    b->BeginEpisode(9);
    for (int i = 0; i < 50; ++i) CHECK(a->Act(obs, 0) == b->Act(obs, 0));
  }
}

TEST_CASE("agent kind names") {
  for (AgentKind kind : {AgentKind::kRandom, AgentKind::kFreeRider,
                         AgentKind::kTasteSeeker, AgentKind::kConventionist,
                         AgentKind::kInert, AgentKind::kLearner}) {
    CHECK(ParseAgentKind(ToString(kind)) == kind);
  }
  CHECK_THROWS_AS(ParseAgentKind("oracle"), InvalidConfig);
  for (FeatureSet set : {FeatureSet::kCompact, FeatureSet::kWindow}) {
    CHECK(ParseFeatureSet(ToString(set)) == set);
  }
}

TEST_CASE("learner features") {
  View v;
  PutBerry(v.state, {5, 7}, 0, true);
  const Observation obs = v.Render();
  const RewardProfile profile = RewardProfile::Preferring(0, 5);
  for (FeatureSet set : {FeatureSet::kCompact, FeatureSet::kWindow}) {
    const std::vector<double> x = ExtractFeatures(set, obs, profile);
    CHECK(static_cast<int>(x.size()) == FeatureCount(set, 5));
  }
  CHECK(FeatureCount(FeatureSet::kCompact, 5) == 7 * 7 * 4 + 1);
  CHECK(FeatureCount(FeatureSet::kWindow, 5) == 11 * 11 * 15 + 1);
  // The ripe-berry channel carries the profile's reward.
  const std::vector<double> x = ExtractFeatures(FeatureSet::kCompact, obs,
                                                profile);
  const std::vector<double> y = ExtractFeatures(
      FeatureSet::kCompact, obs, RewardProfile::Preferring(1, 5));
  CHECK(x != y);
}

TEST_CASE("population binding") {
  const AgentContext ctx;
  std::vector<AgentSpec> specs(4);
  for (int i = 0; i < 4; ++i) specs[i].profile = RewardProfile::Preferring(i, 5);
  Population identity(specs, {}, 4, ctx, 1);
  Rng rng(3);
  CHECK(identity.DrawBinding(rng) == std::vector<int>{0, 1, 2, 3});
  CHECK_THROWS_AS(Population(specs, {}, 5, ctx, 1), InvalidArgument);

  Resampling pool{true, 4, {2, 1, 1}};
  specs[1].profile = specs[0].profile;
  Population pooled(specs, pool, 24, ctx, 1);
  std::vector<int> draws(4, 0);
  for (int e = 0; e < 500; ++e) {
    const std::vector<int> binding = pooled.DrawBinding(rng);
    CHECK(binding.size() == 24);
    for (int a : binding) ++draws[a];
  }
  for (int d : draws) CHECK(d > 2500);
  Rng r1(8), r2(8);
  CHECK(pooled.DrawBinding(r1) == pooled.DrawBinding(r2));

  CHECK_THROWS_AS(Population(specs, Resampling{true, 4, {2, 1}}, 24, ctx, 1),
                  InvalidArgument);
  CHECK_THROWS_AS(Population(specs, Resampling{true, 5, {2, 2, 1}}, 24, ctx, 1),
                  InvalidArgument);
}

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

TEST_CASE("checkpoint round trip") {
  ActorCritic net(20, 12, {}, 4);
  net.weights()[3] = 0.125;
  const std::string path = TempPath("ah_agents_test.ahck");
  SaveCheckpoint(path, "exp-a", 7, 123456, net);
  ActorCritic loaded(20, 12, {}, 99);
  CHECK(loaded.weights() != net.weights());
  const CheckpointHeader h = LoadCheckpoint(path, loaded);
  CHECK(h.experiment_id == "exp-a");
  CHECK(h.agent_id == 7);
  CHECK(h.step == 123456);
  CHECK(loaded.weights() == net.weights());
  CHECK(loaded.optimizer_state() == net.optimizer_state());

  ActorCritic wrong(21, 12, {}, 1);
  CHECK_THROWS_AS(LoadCheckpoint(path, wrong), DimensionMismatch);
  CHECK_THROWS_AS(LoadCheckpoint(TempPath("ah_missing.ahck"), loaded),
                  IoFailure);

  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(4);
    const uint32_t future = kCheckpointVersion + 1;
    f.write(reinterpret_cast<const char*>(&future), sizeof(future));
  }
  CHECK_THROWS_AS(LoadCheckpoint(path, loaded), VersionMismatch);
  {
    std::ofstream f(path, std::ios::binary);
    f << "NOPE";
  }
  CHECK_THROWS_AS(LoadCheckpoint(path, loaded), IoFailure);
  std::remove(path.c_str());

  AgentSpec spec;
  spec.kind = AgentKind::kLearner;
  const std::string manifest = ManifestText(spec);
  CHECK(manifest.find("kind=learner\n") != std::string::npos);
  CHECK(manifest.find("feature_set=compact\n") != std::string::npos);
}

TEST_CASE("learner rejects out-of-order transitions") {
  View v;
  const Observation obs = v.Render();
  AgentSpec spec;
  spec.kind = AgentKind::kLearner;
  spec.profile = RewardProfile::Preferring(0, 5);
  LearnerAgent learner(spec, AgentContext{}, 5);
  Transition t{&obs, Action::kMoveForward, 1.0, &obs, false, 10, 0};
  learner.Observe(t, 0);
  CHECK_THROWS_AS(learner.Observe(t, 0), OutOfOrderTransition);
  t.step = 9;
  CHECK_THROWS_AS(learner.Observe(t, 0), OutOfOrderTransition);
  // Streams are independent.
  learner.Observe(t, 1);
  t.step = 11;
  learner.Observe(t, 0);
  CHECK(learner.transitions_seen() == 3);
  CHECK_THROWS_AS(learner.Observe(t, -1), InvalidArgument);
}

TEST_CASE("learner updates on full segments, gaps and terminals") {
  View v;
  const Observation obs = v.Render();
  AgentSpec spec;
  spec.kind = AgentKind::kLearner;
  spec.profile = RewardProfile::Preferring(0, 5);
  spec.learner.network.segment_length = 5;
  LearnerAgent learner(spec, AgentContext{}, 5);
  Transition t{&obs, Action::kMoveForward, 1.0, &obs, false, 0, 0};
  for (int s = 0; s < 5; ++s) {
    t.step = s;
    learner.Observe(t, 0);
  }
  CHECK(learner.network().updates() == 1);
  t.step = 5;
  learner.Observe(t, 0);
  t.step = 300;  // a removal gap
  learner.Observe(t, 0);
  CHECK(learner.network().updates() == 2);
  t.step = 301;
  t.terminal = true;
  learner.Observe(t, 0);
  CHECK(learner.network().updates() == 3);
  learner.FlushAll();
  CHECK(learner.network().updates() == 3);
}

TEST_CASE("flushing closes streams that end on a full segment") {
  View v;
  const Observation obs = v.Render();
  AgentSpec spec;
  spec.kind = AgentKind::kLearner;
  spec.profile = RewardProfile::Preferring(0, 5);
  spec.learner.network.segment_length = 5;
  LearnerAgent learner(spec, AgentContext{}, 5);
  // The player is zapped right after a segment fills, so the episode ends
  // without a terminal transition and with nothing left to flush.
  Transition t{&obs, Action::kMoveForward, 1.0, &obs, false, 0, 0};
  for (int s = 295; s < 300; ++s) {
    t.step = s;
    learner.Observe(t, 0);
  }
  learner.FlushAll();
  t.step = 0;
  CHECK_NOTHROW(learner.Observe(t, 0));
}

}  // namespace
}  // namespace ah
