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
#include <vector>

#include "ah/equilibrium.h"
#include "ah/errors.h"
#include "ah/rollout.h"
#include "doctest.h"
#include "generators.h"
#include "oracles.h"
#include "scenario.h"

namespace ah {
namespace {

constexpr double kC1 = kDefaultRipenC1;
constexpr double kC3 = kDefaultRipenC3;

TEST_CASE("taste threshold examples") {
  CHECK(TasteThreshold(1.0, kC1, kC3, 685) == 1.0);
  // Hand evaluation of the polynomial at the counts involved.
  const long double f1 = oracle::Polynomial(685, kC1, kC3);
  const long double f_half = oracle::Polynomial(342.5L, kC1, kC3);
  CHECK(static_cast<double>(f1) == doctest::Approx(2892.7738).epsilon(1e-7));
  CHECK(static_cast<double>(f_half) ==
        doctest::Approx(361.5974).epsilon(1e-6));
  CHECK(TasteThreshold(0.5, kC1, kC3, 685) ==
        doctest::Approx(static_cast<double>((f1 - f_half) / f_half))
            .epsilon(1e-12));
  CHECK(TasteThreshold(0.5, kC1, kC3, 685) ==
        doctest::Approx(7.00).epsilon(0.005));
  const long double f_09 = oracle::Polynomial(616.5L, kC1, kC3);
  const long double f_01 = oracle::Polynomial(68.5L, kC1, kC3);
  CHECK(static_cast<double>(f_01) == doctest::Approx(2.8928).epsilon(1e-4));
  CHECK(TasteThreshold(0.1, kC1, kC3, 685) ==
        doctest::Approx(static_cast<double>((f1 - f_09) / f_01))
            .epsilon(1e-12));
  CHECK(TasteThreshold(0.1, kC1, kC3, 685) ==
        doctest::Approx(270.9).epsilon(0.005));

  CHECK_THROWS_AS(TasteThreshold(0.0, kC1, kC3, 685), InvalidArgument);
  CHECK_THROWS_AS(TasteThreshold(1.5, kC1, kC3, 685), InvalidArgument);
  CHECK_THROWS_AS(TasteThreshold(-0.2, kC1, kC3, 685), InvalidArgument);
}

TEST_CASE("taste threshold matches the closed form on random inputs") {
  gen::Gen g(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const double d = g.Real(1e-3, 1.0);
    const double c1 = g.Real(0.0, 1e-3);
    const double c3 = g.Real(1e-9, 1e-4);
    const int b = g.Int(1, 2000);
    const double t = TasteThreshold(d, c1, c3, b);
    CHECK(t == doctest::Approx(oracle::ThresholdClosedForm(d, c1, c3, b))
                   .epsilon(1e-9));
    // Strict convexity with F(0) = 0 makes the bound exceed 1.
    if (d < 1.0 - 1e-9) CHECK(t > 1.0);
  }
}

TEST_CASE("ripening on fraction is the unclamped polynomial") {
  CHECK(RipeningOnFraction(1.0, kC1, kC3, 685) ==
        doctest::Approx(2892.7738).epsilon(1e-7));
  CHECK(RipeningOnFraction(0.0, kC1, kC3, 685) == 0.0);
}

TEST_CASE("threshold curve") {
  const std::vector<double> two = {0.5, 1.0};
  const ThresholdCurve curve = ComputeThresholdCurve(two, kC1, kC3, 685);
  REQUIRE(curve.samples.size() == 2);
  CHECK(curve.samples[0].t_max == doctest::Approx(7.00).epsilon(0.005));
  CHECK(curve.samples[1].t_max == 1.0);
  CHECK(curve.samples[0].t_max > curve.samples[1].t_max);
  CHECK(curve.Csv().rfind("delta,t_max\n0.5,", 0) == 0);

  const std::vector<double> one = {0.3};
  CHECK(ComputeThresholdCurve(one, kC1, kC3, 685).samples.size() == 1);

  std::vector<double> many;
  for (int i = 1; i <= 50; ++i) many.push_back(i / 50.0);
  const ThresholdCurve linear = ComputeThresholdCurve(many, kC1, 0.0, 685);
  for (const ThresholdSample& s : linear.samples) {
    CHECK(s.t_max == doctest::Approx(1.0).epsilon(1e-12));
  }
  const ThresholdCurve cubic = ComputeThresholdCurve(many, kC1, kC3, 685);
  for (size_t i = 1; i < cubic.samples.size(); ++i) {
    CHECK(cubic.samples[i].t_max < cubic.samples[i - 1].t_max);
  }
  const std::vector<double> bad = {0.5, 0.0};
  CHECK_THROWS_AS(ComputeThresholdCurve(bad, kC1, kC3, 685), InvalidArgument);
}

TrajectoryLog EatLog(int players, const std::vector<EatEvent>& eats) {
  TrajectoryLog log;
  log.config = testing::SmallConfig(players);
  log.initial_color_counts = log.config.initial_color_counts;
  for (const EatEvent& e : eats) {
    StepRecord r;
    r.actions.assign(players, Action::kMoveForward);
    r.rewards.assign(players, 0.0);
    r.events.eats.push_back(e);
    r.color_counts = log.initial_color_counts;
    log.steps.push_back(r);
  }
  return log;
}

TEST_CASE("group utility") {
  std::vector<EatEvent> eats;
  for (int i = 0; i < 10; ++i) eats.push_back({0, 2, i});
  for (int i = 0; i < 5; ++i) eats.push_back({0, 4, i});
  const TrajectoryLog log = EatLog(4, eats);
  const std::vector<int> member = {0};
  const RewardProfile prefers_two = RewardProfile::Preferring(2, 5);
  CHECK(GroupUtility(std::span(&log, 1), prefers_two, member) == 25.0);
  CHECK(GroupUtility(std::span(&log, 1), RewardProfile::Uniform(5), member) ==
        15.0);

  const std::vector<int> other = {1, 2};
  CHECK(GroupUtility(std::span(&log, 1), prefers_two, other) == 0.0);
  // Averaged over members and over episodes.
  const std::vector<int> both = {0, 1};
  CHECK(GroupUtility(std::span(&log, 1), prefers_two, both) == 12.5);
  const std::vector<TrajectoryLog> twice = {log, EatLog(4, {})};
  CHECK(GroupUtility(twice, prefers_two, member) == 12.5);

  CHECK_THROWS_AS(GroupUtility(std::span(&log, 1), prefers_two, {}),
                  InvalidArgument);
  CHECK_THROWS_AS(GroupUtility({}, prefers_two, member), InvalidArgument);
}

TEST_CASE("group utility is linear in the profile") {
  gen::Gen g(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EatEvent> eats;
    const int n = g.Int(0, 40);
    for (int i = 0; i < n; ++i) eats.push_back({g.Int(0, 3), g.Int(0, 4), 0});
    const TrajectoryLog log = EatLog(4, eats);
    RewardProfile a{{}}, b{{}}, sum{{}};
    for (int k = 0; k < 5; ++k) {
      a.per_color_reward.push_back(g.Real(0, 3));
      b.per_color_reward.push_back(g.Real(0, 3));
      sum.per_color_reward.push_back(a.per_color_reward[k] + b.per_color_reward[k]);
    }
    const std::vector<int> members = {0, 2};
    const double ua = GroupUtility(std::span(&log, 1), a, members);
    const double ub = GroupUtility(std::span(&log, 1), b, members);
    CHECK(GroupUtility(std::span(&log, 1), sum, members) ==
          doctest::Approx(ua + ub).epsilon(1e-12));
  }
}

TrajectoryLog PlantLog(std::vector<int> initial,
                       const std::vector<PlantEvent>& plants) {
  TrajectoryLog log;
  log.config = testing::SmallConfig(4);
  log.config.berry_total = 60;
  log.initial_color_counts = initial;
  std::vector<int> counts = initial;
  for (const PlantEvent& p : plants) {
    StepRecord r;
    r.actions.assign(4, Action::kMoveForward);
    r.rewards.assign(4, 0.0);
    r.events.plants.push_back(p);
    --counts[p.old_color];
    ++counts[p.new_color];
    r.color_counts = counts;
    log.steps.push_back(r);
  }
  return log;
}

TEST_CASE("policy classification") {
  const std::vector<int> mono = {60, 0, 0, 0, 0};
  const TrajectoryLog none = PlantLog(mono, {});
  CHECK(ClassifyPolicy(std::span(&none, 1), 0).alpha == 0.0);
  CHECK(ClassifyPolicy(std::span(&none, 1), 0).label == PolicyLabel::kCooperate);

  const TrajectoryLog defect =
      PlantLog(mono, {{1, 3, 0, 2}, {1, 4, 0, 2}, {1, 5, 0, 2}, {0, 6, 0, 2}});
  const PolicyClass c = ClassifyPolicy(std::span(&defect, 1), 1);
  CHECK(c.alpha == 3.0 / 60.0);
  CHECK(c.label == PolicyLabel::kDefect);
  CHECK(ClassifyPolicy(std::span(&defect, 1), 1, 0.05).label ==
        PolicyLabel::kCooperate);
  CHECK(ClassifyPolicy(std::span(&defect, 1), 1, 0.049).label ==
        PolicyLabel::kDefect);

  // Replanting the dominant color does not count.
  const TrajectoryLog restore =
      PlantLog({50, 10, 0, 0, 0}, {{2, 3, 1, 0}, {2, 4, 1, 0}});
  CHECK(ClassifyPolicy(std::span(&restore, 1), 2).alpha == 0.0);

  // Eat-only steps leave alpha unchanged.
  TrajectoryLog padded = defect;
  StepRecord idle = padded.steps.back();
  idle.events = {};
  idle.events.eats.push_back({1, 0, 9});
  padded.steps.insert(padded.steps.begin() + 1, idle);
  padded.steps.push_back(idle);
  CHECK(ClassifyPolicy(std::span(&padded, 1), 1).alpha == c.alpha);

  CHECK(ToString(PolicyLabel::kDefect) == "defect");
  CHECK(ToString(PolicyLabel::kCooperate) == "cooperate");
}

EnvConfig MonocultureWorld(int length = 300) {
  EnvConfig c = testing::SmallConfig(6, 60, length);
  c.initial_color_counts = {60, 0, 0, 0, 0};
  // The default cubic saturates at 60 berries; scale it so p(60) = 0.05.
  c.ripen_c1 = 0.0;
  c.ripen_c3 = 0.05 / (60.0 * 60.0 * 60.0);
  c.seed = 77;
  return c;
}

RolloutTask WithDeviator(const EnvConfig& c, AgentSpec deviator) {
  RolloutTask task{c, {}, 5};
  for (int i = 0; i < c.num_players; ++i) {
    AgentSpec s;
    s.kind = AgentKind::kFreeRider;
    s.profile = c.reward_profiles[i];
    task.specs.push_back(s);
  }
  deviator.profile = c.reward_profiles[0];
  task.specs[0] = deviator;
  return task;
}

TEST_CASE("classification of scripted rollouts") {
  const EnvConfig c = MonocultureWorld();
  AgentSpec free_rider;
  free_rider.kind = AgentKind::kFreeRider;
  const TrajectoryLog fr = RunTask(WithDeviator(c, free_rider));
  CHECK(ClassifyPolicy(std::span(&fr, 1), 0).label == PolicyLabel::kCooperate);

  AgentSpec dominant;
  dominant.kind = AgentKind::kTasteSeeker;
  dominant.target_color = 0;
  const TrajectoryLog dm = RunTask(WithDeviator(c, dominant));
  CHECK(ClassifyPolicy(std::span(&dm, 1), 0).alpha == 0.0);

  AgentSpec seeker;
  seeker.kind = AgentKind::kTasteSeeker;
  seeker.target_color = 3;
  const TrajectoryLog ts = RunTask(WithDeviator(c, seeker));
  // Replay the plant events against running counts to find the dominant
  // color before each step.
  std::vector<int> counts = ts.initial_color_counts;
  int off_dominant = 0;
  for (const StepRecord& s : ts.steps) {
    int dominant = 0;
    for (int k = 1; k < 5; ++k) {
      if (counts[k] > counts[dominant]) dominant = k;
    }
    for (const PlantEvent& p : s.events.plants) {
      off_dominant += p.player == 0 && p.new_color != dominant;
    }
    for (const PlantEvent& p : s.events.plants) {
      --counts[p.old_color];
      ++counts[p.new_color];
    }
  }
  CHECK(counts == ts.steps.back().color_counts);
  const PolicyClass pc = ClassifyPolicy(std::span(&ts, 1), 0);
  CHECK(off_dominant > 0);
  CHECK(pc.alpha == doctest::Approx(off_dominant / 60.0));

  seeker.plant_budget = 6;
  const TrajectoryLog budget = RunTask(WithDeviator(c, seeker));
  CHECK(ClassifyPolicy(std::span(&budget, 1), 0).alpha == 0.1);
  CHECK(pc.label == PolicyLabel::kDefect);
}

TEST_CASE("deviation test with identical arms is inconclusive") {
  const EnvConfig c = MonocultureWorld(200);
  AgentSpec same;
  same.kind = AgentKind::kFreeRider;
  for (uint64_t seed : {1ull, 2ull, 99ull}) {
    EnvConfig seeded = c;
    seeded.seed = seed;
    const DeviationReport r = DeviationTest(seeded, same, {.trials = 6});
    CHECK(r.verdict == Verdict::kInconclusive);
    CHECK(r.cooperate_return_mean == r.deviate_return_mean);
    CHECK(r.measured_delta == 0.0);
    CHECK(r.trials == 6);
  }
  CHECK_THROWS_AS(DeviationTest(c, same, {.trials = 1}), InvalidArgument);
  CHECK_THROWS_AS(DeviationTest(c, same, {.trials = 4, .deviator = 6}),
                  InvalidArgument);
  CHECK(ToString(Verdict::kDeviationUnprofitable) == "deviation-unprofitable");
  CHECK(ToString(Verdict::kDeviationProfitable) == "deviation-profitable");
}

TEST_CASE("deviation test serial and parallel agree") {
  const EnvConfig c = MonocultureWorld(150);
  AgentSpec seeker;
  seeker.kind = AgentKind::kTasteSeeker;
  seeker.target_color = 2;
  const DeviationReport a =
      DeviationTest(c, seeker, {.trials = 4, .parallel = true});
  const DeviationReport b =
      DeviationTest(c, seeker, {.trials = 4, .parallel = false});
  CHECK(a.cooperate_return_mean == b.cooperate_return_mean);
  CHECK(a.deviate_return_mean == b.deviate_return_mean);
  CHECK(a.confidence_halfwidth == b.confidence_halfwidth);
  CHECK(a.measured_delta > 0.0);
}

TEST_CASE("pareto check") {
  const double b = 40.0;
  const ParetoReport sym = ParetoCheck({{2 * b, b}, {b, 2 * b}});
  CHECK_FALSE(sym.degenerate);
  CHECK(sym.switches.size() == 2);
  CHECK(sym.improvements.empty());
  CHECK(sym.pareto_optimal == std::vector<int>{0, 1});
  for (const ParetoSwitch& s : sym.switches) {
    CHECK(s.helped.size() == 1);
    CHECK(s.hurt.size() == 1);
  }

  const ParetoReport single = ParetoCheck({{2 * b, b, b}});
  CHECK(single.degenerate);
  REQUIRE(single.improvements.size() == 2);
  for (const ParetoSwitch& s : single.improvements) CHECK(s.to == 0);
  CHECK(single.pareto_optimal == std::vector<int>{0});

  // Equal utilities are neither helped nor hurt.
  const ParetoReport flat = ParetoCheck({{1, 1}, {1, 1}});
  CHECK(flat.improvements.empty());
  CHECK(flat.switches[0].helped.empty());

  CHECK_THROWS_AS(ParetoCheck({{1, 2}, {1}}), DimensionMismatch);
}

TEST_CASE("monoculture utilities favor each group's own color") {
  EnvConfig c = testing::SmallConfig(8, 60, 300);
  const GroupSpec groups = GroupsFromProfiles(c.reward_profiles);
  const std::vector<uint64_t> seeds = {3, 4};
  const auto u = MonocultureUtilities(c, groups, seeds);
  REQUIRE(u.size() == 4);
  for (int g = 0; g < 4; ++g) {
    REQUIRE(u[g].size() == 5);
    for (int k = 0; k < 5; ++k) {
      if (k != g) CHECK(u[g][g] > u[g][k]);
    }
  }
  CHECK(MonocultureUtilities(c, groups, seeds, false) == u);
}

}  // namespace
}  // namespace ah
