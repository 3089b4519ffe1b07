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

#ifndef AH_METRICS_H_
#define AH_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ah/env_config.h"
#include "ah/environment.h"

namespace ah {

// Point on the (K-1)-simplex: share of berries per color.
struct Signature {
  std::vector<double> proportions;

  int size() const { return static_cast<int>(proportions.size()); }
  double operator[](int k) const { return proportions[k]; }
  bool operator==(const Signature&) const = default;
};

struct StepRecord {
  std::vector<Action> actions;
  std::vector<double> rewards;
  StepEvents events;
  // Counts after the step.
  std::vector<int> color_counts;
  bool operator==(const StepRecord&) const = default;
};

struct TrajectoryLog {
  // Effective config of the episode (profiles included).
  EnvConfig config;
  uint64_t seed = 0;
  std::vector<int> initial_color_counts;
  std::vector<StepRecord> steps;

  int length() const { return static_cast<int>(steps.size()); }
  // Counts before step t.
  std::span<const int> CountsBefore(int t) const {
    return t == 0 ? std::span<const int>(initial_color_counts)
                  : std::span<const int>(steps[t - 1].color_counts);
  }
  bool operator==(const TrajectoryLog&) const = default;
};

struct Group {
  std::optional<int> preferred_color;
  std::vector<int> members;
  RewardProfile profile;
  bool operator==(const Group&) const = default;
};

struct GroupSpec {
  std::vector<Group> groups;

  int num_players() const;
  // Group index of every player; throws InvalidArgument unless the groups
  // partition players 0..num_players-1.
  std::vector<int> Membership(int num_players) const;
  bool operator==(const GroupSpec&) const = default;
};

// Players sharing an identical profile form one group, ordered by first
// appearance.
GroupSpec GroupsFromProfiles(std::span<const RewardProfile> profiles);

Signature ComputeSignature(std::span<const int> color_counts);

// Uniform average of the per-step signatures of every logged step, skipping
// the first `burn_in` steps of each log.
Signature ExpectedSignature(std::span<const TrajectoryLog> logs,
                            int burn_in = 0);
Signature ExpectedSignature(const TrajectoryLog& log, int burn_in = 0);

// Entry k is the share of players whose preferred color is k. Groups without
// a preferred color are refused with ConventionalityUndefined.
Signature TasteSeekingSignature(const GroupSpec& groups, int num_colors);

// Kolmogorov-Smirnov distance between two categorical distributions under
// the palette order: max over prefixes of |CDF_p - CDF_q|.
double KsDistance(const Signature& p, const Signature& q);

// KS(taste-seeking signature, expected signature). Requires at least two
// distinct preferred colors.
double Conventionality(std::span<const TrajectoryLog> logs,
                       const GroupSpec& groups, int burn_in = 0);

double MonocultureFraction(std::span<const int> color_counts);

// Shannon entropy of the color shares in nats.
double BerryEntropy(std::span<const int> color_counts);

// Index of the most common color, lowest index on ties.
int MostCommonColor(std::span<const int> color_counts);

struct GroupTally {
  std::vector<int64_t> eats_by_color;
  std::vector<int64_t> plants_by_color;
  int64_t plants_most_common = 0;
  int64_t plants_other = 0;
  int64_t zaps = 0;
  double returns = 0.0;
  bool operator==(const GroupTally&) const = default;
};

struct TallyBucket {
  int log_index = 0;
  int start = 0;  // first step, inclusive
  int end = 0;    // last step, exclusive
  std::vector<int64_t> eats_by_color;
  std::vector<int64_t> plants_by_color;
  int64_t plants_most_common = 0;
  int64_t zaps = 0;
  std::vector<double> mean_signature;
  double mean_monoculture = 0.0;
  double mean_entropy = 0.0;
  bool operator==(const TallyBucket&) const = default;
};

struct TallyReport {
  int num_colors = 0;
  std::vector<GroupTally> groups;
  std::vector<int64_t> eats_by_color;
  std::vector<int64_t> plants_by_color;
  int64_t plants_most_common = 0;
  int64_t zaps = 0;
  // Summed over logs, indexed by player slot.
  std::vector<double> player_returns;
  std::vector<TallyBucket> buckets;

  int64_t total_eats() const;
  int64_t total_plants() const;
  bool operator==(const TallyReport&) const = default;
};

// "Most common" refers to the color counts just before the planting step.
TallyReport Tally(std::span<const TrajectoryLog> logs, const GroupSpec& groups,
                  int bucket_size = 200);

// Formats a double with the shortest representation that round-trips.
std::string FormatDouble(double value);

// One row per bucket. Columns:
//   log,start,end,eats,plants,plants_most_common,zaps,
//   eats_c<k>..., plants_c<k>..., signature_c<k>..., monoculture,entropy
std::string BucketTableCsv(const TallyReport& report);

}  // namespace ah

#endif  // AH_METRICS_H_
