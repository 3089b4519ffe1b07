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

#ifndef AH_EQUILIBRIUM_H_
#define AH_EQUILIBRIUM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ah/agents.h"
#include "ah/env_config.h"
#include "ah/metrics.h"

namespace ah {

// Unclamped ripening polynomial on a berry fraction x:
//   F(x) = c1 (B x) + c3 (B x)^3.
double RipeningOnFraction(double fraction, double c1, double c3,
                          int berry_total);

// Largest taste ratio t for which a unilateral deviation that lowers the
// monoculture fraction by `delta` does not pay:
//   (F(1) - F(1 - delta)) / F(delta).
// Throws InvalidArgument unless 0 < delta <= 1.
double TasteThreshold(double delta, double c1, double c3, int berry_total);

struct ThresholdSample {
  double delta;
  double t_max;
};

struct ThresholdCurve {
  std::vector<ThresholdSample> samples;
  // Two columns, "delta,t_max".
  std::string Csv() const;
};

ThresholdCurve ComputeThresholdCurve(std::span<const double> deltas, double c1,
                                     double c3, int berry_total);

// Mean over members and episodes of the profile-weighted consumption count.
double GroupUtility(std::span<const TrajectoryLog> logs,
                    const RewardProfile& profile,
                    std::span<const int> members);

enum class PolicyLabel { kCooperate, kDefect };
std::string ToString(PolicyLabel label);

struct PolicyClass {
  // Mean per-episode recolorings into a non-dominant color, over B.
  double alpha = 0.0;
  PolicyLabel label = PolicyLabel::kCooperate;
};

// Label is kDefect iff alpha > eta.
PolicyClass ClassifyPolicy(std::span<const TrajectoryLog> logs, int player,
                           double eta = 0.0);

enum class Verdict {
  kDeviationUnprofitable,
  kDeviationProfitable,
  kInconclusive,
};
std::string ToString(Verdict verdict);

struct DeviationReport {
  double cooperate_return_mean = 0.0;
  double deviate_return_mean = 0.0;
  double cooperate_halfwidth = 0.0;
  double deviate_halfwidth = 0.0;
  // Larger of the two arm halfwidths.
  double confidence_halfwidth = 0.0;
  int trials = 0;
  Verdict verdict = Verdict::kInconclusive;
  // Mean monoculture fraction of each arm, and the drop between them.
  double cooperate_monoculture = 0.0;
  double deviate_monoculture = 0.0;
  double measured_delta = 0.0;
};

struct DeviationOptions {
  int trials = 200;
  int deviator = 0;
  bool parallel = true;
};

inline constexpr double kZ95 = 1.959963984540054;

// Monte-Carlo comparison of one player's return when it keeps harvesting
// (cooperate arm, eat-only) versus playing `deviator_policy`, with everyone
// else eating only. Both arms of trial i share seeds. Verdict is
// inconclusive iff the two 95% intervals overlap.
DeviationReport DeviationTest(const EnvConfig& config,
                              const AgentSpec& deviator_policy,
                              DeviationOptions options = {});

struct ParetoSwitch {
  int from = 0;
  int to = 0;
  std::vector<int> helped;
  std::vector<int> hurt;
};

struct ParetoReport {
  // Fewer than two groups: the population shares one objective.
  bool degenerate = false;
  std::vector<ParetoSwitch> switches;
  std::vector<ParetoSwitch> improvements;
  // Monocultures no switch improves upon.
  std::vector<int> pareto_optimal;
};

// utilities[g][k]: utility of group g at the color-k monoculture. A switch
// k -> j is an improvement when it strictly helps some group and hurts none.
ParetoReport ParetoCheck(const std::vector<std::vector<double>>& utilities);

// Eat-only rollouts at each monoculture of `base` (one episode per seed);
// returns group_utility per group and color.
std::vector<std::vector<double>> MonocultureUtilities(
    const EnvConfig& base, const GroupSpec& groups,
    std::span<const uint64_t> seeds, bool parallel = true);

}  // namespace ah

#endif  // AH_EQUILIBRIUM_H_
