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

#include "ah/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ah/errors.h"
#include "ah/rollout.h"

namespace ah {
namespace {

struct MeanInterval {
  double mean = 0.0;
  double halfwidth = 0.0;
};

MeanInterval NormalInterval(std::span<const double> values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, kZ95 * sd / std::sqrt(n)};
}

double MeanMonoculture(const TrajectoryLog& log) {
  double m = 0.0;
  for (const StepRecord& r : log.steps) m += MonocultureFraction(r.color_counts);
  return log.steps.empty() ? 0.0 : m / log.steps.size();
}

}  // namespace

double RipeningOnFraction(double fraction, double c1, double c3,
                          int berry_total) {
  const double b = berry_total * fraction;
  return c1 * b + c3 * b * b * b;
}

double TasteThreshold(double delta, double c1, double c3, int berry_total) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1]");
  }
  const double gain = RipeningOnFraction(delta, c1, c3, berry_total);
  if (gain <= 0.0) throw InvalidArgument("ripening polynomial vanishes");
  const double loss = RipeningOnFraction(1.0, c1, c3, berry_total) -
                      RipeningOnFraction(1.0 - delta, c1, c3, berry_total);
  return loss / gain;
}

std::string ThresholdCurve::Csv() const {
  std::ostringstream out;
  out << "delta,t_max\n";
  for (const ThresholdSample& s : samples) {
    out << FormatDouble(s.delta) << ',' << FormatDouble(s.t_max) << '\n';
  }
  return out.str();
}

ThresholdCurve ComputeThresholdCurve(std::span<const double> deltas, double c1,
                                     double c3, int berry_total) {
  ThresholdCurve curve;
  for (double d : deltas) {
    curve.samples.push_back({d, TasteThreshold(d, c1, c3, berry_total)});
  }
  return curve;
}

double GroupUtility(std::span<const TrajectoryLog> logs,
                    const RewardProfile& profile,
                    std::span<const int> members) {
  if (members.empty()) throw InvalidArgument("empty member set");
  if (logs.empty()) throw InvalidArgument("no trajectory logs");
  double total = 0.0;
  for (const TrajectoryLog& log : logs) {
    std::vector<uint8_t> is_member(log.config.num_players, 0);
    for (int m : members) {
      if (m < 0 || m >= log.config.num_players) {
        throw InvalidArgument("member index out of range");
      }
      is_member[m] = 1;
    }
    for (const StepRecord& r : log.steps) {
      for (const EatEvent& e : r.events.eats) {
        if (is_member[e.player]) total += profile[e.color];
      }
    }
  }
  return total / (static_cast<double>(members.size()) * logs.size());
}

std::string ToString(PolicyLabel label) {
  return label == PolicyLabel::kDefect ? "defect" : "cooperate";
}

PolicyClass ClassifyPolicy(std::span<const TrajectoryLog> logs, int player,
                           double eta) {
  PolicyClass result;
  if (logs.empty()) return result;
  double plants = 0.0;
  for (const TrajectoryLog& log : logs) {
    for (int t = 0; t < log.length(); ++t) {
      const int dominant = MostCommonColor(log.CountsBefore(t));
      for (const PlantEvent& p : log.steps[t].events.plants) {
        if (p.player == player && p.new_color != dominant) plants += 1.0;
      }
    }
  }
  const int berry_total = logs.front().config.berry_total;
  result.alpha = plants / static_cast<double>(logs.size()) /
                 static_cast<double>(std::max(1, berry_total));
  result.label = result.alpha > eta ? PolicyLabel::kDefect
                                    : PolicyLabel::kCooperate;
  return result;
}

std::string ToString(Verdict verdict) {
  switch (verdict) {
    case Verdict::kDeviationUnprofitable:
      return "deviation-unprofitable";
    case Verdict::kDeviationProfitable:
      return "deviation-profitable";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

DeviationReport DeviationTest(const EnvConfig& config,
                              const AgentSpec& deviator_policy,
                              DeviationOptions options) {
  if (options.trials < 2) {
    throw InvalidArgument("insufficient trials: need at least 2");
  }
  config.Validate();
  if (options.deviator < 0 || options.deviator >= config.num_players) {
    throw InvalidArgument("deviator index out of range");
  }
  std::vector<AgentSpec> cooperate(config.num_players);
  for (int i = 0; i < config.num_players; ++i) {
    cooperate[i].kind = AgentKind::kFreeRider;
    cooperate[i].profile = config.reward_profiles[i];
  }
  std::vector<AgentSpec> deviate = cooperate;
  deviate[options.deviator] = deviator_policy;
  deviate[options.deviator].profile = config.reward_profiles[options.deviator];

  std::vector<RolloutTask> tasks;
  tasks.reserve(2 * options.trials);
  for (int trial = 0; trial < options.trials; ++trial) {
    RolloutTask task;
    task.env = config;
    task.env.seed = ExpandSeed(config.seed, trial, kEnvStream);
    task.agent_seed = ExpandSeed(config.seed, trial, kAgentStream);
    task.specs = cooperate;
    tasks.push_back(task);
    task.specs = deviate;
    tasks.push_back(std::move(task));
  }
  const std::vector<TrajectoryLog> logs =
      options.parallel ? RolloutParallel(tasks) : RolloutSerial(tasks);

  std::vector<double> coop_returns;
  std::vector<double> dev_returns;
  double coop_m = 0.0;
  double dev_m = 0.0;
  for (int trial = 0; trial < options.trials; ++trial) {
    for (int arm = 0; arm < 2; ++arm) {
      const TrajectoryLog& log = logs[2 * trial + arm];
      double ret = 0.0;
      for (const StepRecord& r : log.steps) ret += r.rewards[options.deviator];
      (arm == 0 ? coop_returns : dev_returns).push_back(ret);
      (arm == 0 ? coop_m : dev_m) += MeanMonoculture(log);
    }
  }
  DeviationReport report;
  report.trials = options.trials;
  const MeanInterval c = NormalInterval(coop_returns);
  const MeanInterval d = NormalInterval(dev_returns);
  report.cooperate_return_mean = c.mean;
  report.deviate_return_mean = d.mean;
  report.cooperate_halfwidth = c.halfwidth;
  report.deviate_halfwidth = d.halfwidth;
  report.confidence_halfwidth = std::max(c.halfwidth, d.halfwidth);
  report.cooperate_monoculture = coop_m / options.trials;
  report.deviate_monoculture = dev_m / options.trials;
  report.measured_delta =
      report.cooperate_monoculture - report.deviate_monoculture;
  const bool overlap = c.mean - c.halfwidth <= d.mean + d.halfwidth &&
                       d.mean - d.halfwidth <= c.mean + c.halfwidth;
  if (overlap) {
    report.verdict = Verdict::kInconclusive;
  } else if (d.mean < c.mean) {
    report.verdict = Verdict::kDeviationUnprofitable;
  } else {
    report.verdict = Verdict::kDeviationProfitable;
  }
  return report;
}

ParetoReport ParetoCheck(const std::vector<std::vector<double>>& utilities) {
  ParetoReport report;
  report.degenerate = utilities.size() < 2;
  if (utilities.empty()) return report;
  const int k = static_cast<int>(utilities.front().size());
  for (const auto& row : utilities) {
    if (static_cast<int>(row.size()) != k) {
      throw DimensionMismatch("ragged utility matrix");
    }
  }
  std::vector<uint8_t> improvable(k, 0);
  for (int from = 0; from < k; ++from) {
    for (int to = 0; to < k; ++to) {
      if (from == to) continue;
      ParetoSwitch s{from, to, {}, {}};
      for (size_t g = 0; g < utilities.size(); ++g) {
        if (utilities[g][to] > utilities[g][from]) {
          s.helped.push_back(static_cast<int>(g));
        } else if (utilities[g][to] < utilities[g][from]) {
          s.hurt.push_back(static_cast<int>(g));
        }
      }
      if (!s.helped.empty() && s.hurt.empty()) {
        report.improvements.push_back(s);
        improvable[from] = 1;
      }
      report.switches.push_back(std::move(s));
    }
  }
  for (int c = 0; c < k; ++c) {
    if (!improvable[c]) report.pareto_optimal.push_back(c);
  }
  return report;
}

std::vector<std::vector<double>> MonocultureUtilities(
    const EnvConfig& base, const GroupSpec& groups,
    std::span<const uint64_t> seeds, bool parallel) {
  const int k = base.num_colors;
  std::vector<RolloutTask> tasks;
  for (int color = 0; color < k; ++color) {
    for (uint64_t seed : seeds) {
      RolloutTask task;
      task.env = base;
      task.env.initial_color_counts.assign(k, 0);
      task.env.initial_color_counts[color] = base.berry_total;
      task.env.seed = seed;
      task.agent_seed = SplitMix64(seed);
      for (int i = 0; i < base.num_players; ++i) {
        AgentSpec s;
        s.kind = AgentKind::kFreeRider;
        s.profile = base.reward_profiles[i];
        task.specs.push_back(s);
      }
      tasks.push_back(std::move(task));
    }
  }
  const std::vector<TrajectoryLog> logs =
      parallel ? RolloutParallel(tasks) : RolloutSerial(tasks);
  std::vector<std::vector<double>> utilities(
      groups.groups.size(), std::vector<double>(k, 0.0));
  for (int color = 0; color < k; ++color) {
    const std::span<const TrajectoryLog> slice(
        logs.data() + color * seeds.size(), seeds.size());
    for (size_t g = 0; g < groups.groups.size(); ++g) {
      utilities[g][color] = GroupUtility(slice, groups.groups[g].profile,
                                         groups.groups[g].members);
    }
  }
  return utilities;
}

}  // namespace ah
