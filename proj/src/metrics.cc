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

#include "ah/metrics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ah/errors.h"

namespace ah {
namespace {

int64_t CountSum(std::span<const int> counts) {
  int64_t total = 0;
  for (int c : counts) total += c;
  return total;
}

void RequireBerries(std::span<const int> counts) {
  if (CountSum(counts) <= 0) throw EmptyState("no berries in state");
}

}  // namespace

int GroupSpec::num_players() const {
  int n = 0;
  for (const Group& g : groups) n += static_cast<int>(g.members.size());
  return n;
}

std::vector<int> GroupSpec::Membership(int num_players) const {
  std::vector<int> group_of(num_players, -1);
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int member : groups[g].members) {
      if (member < 0 || member >= num_players) {
        throw InvalidArgument("group member " + std::to_string(member) +
                              " out of range");
      }
      if (group_of[member] != -1) {
        throw InvalidArgument("player " + std::to_string(member) +
                              " belongs to two groups");
      }
      group_of[member] = static_cast<int>(g);
    }
  }
  for (int i = 0; i < num_players; ++i) {
    if (group_of[i] == -1) {
      throw InvalidArgument("player " + std::to_string(i) +
                            " belongs to no group");
    }
  }
  return group_of;
}

GroupSpec GroupsFromProfiles(std::span<const RewardProfile> profiles) {
  GroupSpec spec;
  for (size_t i = 0; i < profiles.size(); ++i) {
    auto it = std::find_if(
        spec.groups.begin(), spec.groups.end(),
        [&](const Group& g) { return g.profile == profiles[i]; });
    if (it == spec.groups.end()) {
      spec.groups.push_back(
          {profiles[i].PreferredColor(), {}, profiles[i]});
      it = spec.groups.end() - 1;
    }
    it->members.push_back(static_cast<int>(i));
  }
  return spec;
}

Signature ComputeSignature(std::span<const int> color_counts) {
  RequireBerries(color_counts);
  const double total = static_cast<double>(CountSum(color_counts));
  Signature s;
  s.proportions.reserve(color_counts.size());
  for (int c : color_counts) s.proportions.push_back(c / total);
  return s;
}

Signature ExpectedSignature(std::span<const TrajectoryLog> logs, int burn_in) {
  if (logs.empty()) throw InvalidArgument("no trajectory logs");
  const size_t k = logs.front().initial_color_counts.size();
  std::vector<double> sum(k, 0.0);
  int64_t steps = 0;
  for (const TrajectoryLog& log : logs) {
    if (log.initial_color_counts.size() != k) {
      throw DimensionMismatch("logs disagree on the number of colors");
    }
    for (int t = burn_in; t < log.length(); ++t) {
      const Signature s = ComputeSignature(log.steps[t].color_counts);
      for (size_t c = 0; c < k; ++c) sum[c] += s.proportions[c];
      ++steps;
    }
  }
  if (steps == 0) throw InvalidArgument("no logged steps after burn-in");
  for (double& v : sum) v /= static_cast<double>(steps);
  return {sum};
}

Signature ExpectedSignature(const TrajectoryLog& log, int burn_in) {
  return ExpectedSignature(std::span<const TrajectoryLog>(&log, 1), burn_in);
}

Signature TasteSeekingSignature(const GroupSpec& groups, int num_colors) {
  std::vector<double> counts(num_colors, 0.0);
  double n = 0.0;
  for (const Group& g : groups.groups) {
    if (g.members.empty()) continue;
    if (!g.preferred_color) {
      throw ConventionalityUndefined(
          "taste-seeking signature undefined for a group without a "
          "preferred color");
    }
    if (*g.preferred_color < 0 || *g.preferred_color >= num_colors) {
      throw DimensionMismatch("preferred color out of range");
    }
    counts[*g.preferred_color] += static_cast<double>(g.members.size());
    n += static_cast<double>(g.members.size());
  }
  if (n == 0.0) throw InvalidArgument("no players in groups");
  for (double& c : counts) c /= n;
  return {counts};
}

double KsDistance(const Signature& p, const Signature& q) {
  if (p.size() != q.size()) {
    throw DimensionMismatch("signatures have " + std::to_string(p.size()) +
                            " and " + std::to_string(q.size()) + " colors");
  }
  double cp = 0.0;
  double cq = 0.0;
  double best = 0.0;
  for (int k = 0; k < p.size(); ++k) {
    cp += p[k];
    cq += q[k];
    best = std::max(best, std::abs(cp - cq));
  }
  return std::min(best, 1.0);
}

double Conventionality(std::span<const TrajectoryLog> logs,
                       const GroupSpec& groups, int burn_in) {
  std::vector<int> preferred;
  for (const Group& g : groups.groups) {
    if (!g.members.empty() && g.preferred_color) {
      preferred.push_back(*g.preferred_color);
    }
  }
  std::sort(preferred.begin(), preferred.end());
  preferred.erase(std::unique(preferred.begin(), preferred.end()),
                  preferred.end());
  if (preferred.size() < 2) {
    throw ConventionalityUndefined(
        "conventionality needs at least two distinct preferred colors");
  }
  if (logs.empty()) throw InvalidArgument("no trajectory logs");
  const int k = static_cast<int>(logs.front().initial_color_counts.size());
  return KsDistance(TasteSeekingSignature(groups, k),
                    ExpectedSignature(logs, burn_in));
}

double MonocultureFraction(std::span<const int> color_counts) {
  RequireBerries(color_counts);
  const int best = *std::max_element(color_counts.begin(), color_counts.end());
  return static_cast<double>(best) /
         static_cast<double>(CountSum(color_counts));
}

double BerryEntropy(std::span<const int> color_counts) {
  RequireBerries(color_counts);
  const double total = static_cast<double>(CountSum(color_counts));
  double h = 0.0;
  for (int c : color_counts) {
    if (c == 0) continue;
    const double p = c / total;
    h -= p * std::log(p);
  }
  return h;
}

int MostCommonColor(std::span<const int> color_counts) {
  return static_cast<int>(
      std::max_element(color_counts.begin(), color_counts.end()) -
      color_counts.begin());
}

int64_t TallyReport::total_eats() const {
  return std::accumulate(eats_by_color.begin(), eats_by_color.end(),
                         int64_t{0});
}

int64_t TallyReport::total_plants() const {
  return std::accumulate(plants_by_color.begin(), plants_by_color.end(),
                         int64_t{0});
}

TallyReport Tally(std::span<const TrajectoryLog> logs, const GroupSpec& groups,
                  int bucket_size) {
  if (bucket_size <= 0) throw InvalidArgument("bucket_size must be positive");
  TallyReport report;
  int k = 0;
  int n = groups.num_players();
  if (!logs.empty()) {
    k = static_cast<int>(logs.front().initial_color_counts.size());
    n = logs.front().config.num_players;
  } else if (!groups.groups.empty()) {
    k = groups.groups.front().profile.num_colors();
  }
  report.num_colors = k;
  report.eats_by_color.assign(k, 0);
  report.plants_by_color.assign(k, 0);
  report.player_returns.assign(n, 0.0);
  report.groups.assign(groups.groups.size(),
                       GroupTally{std::vector<int64_t>(k, 0),
                                  std::vector<int64_t>(k, 0)});
  if (logs.empty()) return report;
  const std::vector<int> group_of = groups.Membership(n);

  for (size_t li = 0; li < logs.size(); ++li) {
    const TrajectoryLog& log = logs[li];
    if (static_cast<int>(log.initial_color_counts.size()) != k ||
        log.config.num_players != n) {
      throw DimensionMismatch("logs disagree on colors or players");
    }
    for (int start = 0; start < log.length(); start += bucket_size) {
      TallyBucket bucket;
      bucket.log_index = static_cast<int>(li);
      bucket.start = start;
      bucket.end = std::min(log.length(), start + bucket_size);
      bucket.eats_by_color.assign(k, 0);
      bucket.plants_by_color.assign(k, 0);
      bucket.mean_signature.assign(k, 0.0);
      for (int t = bucket.start; t < bucket.end; ++t) {
        const StepRecord& rec = log.steps[t];
        const int dominant = MostCommonColor(log.CountsBefore(t));
        for (const EatEvent& e : rec.events.eats) {
          ++bucket.eats_by_color[e.color];
          ++report.groups[group_of[e.player]].eats_by_color[e.color];
        }
        for (const PlantEvent& p : rec.events.plants) {
          ++bucket.plants_by_color[p.new_color];
          GroupTally& g = report.groups[group_of[p.player]];
          ++g.plants_by_color[p.new_color];
          if (p.new_color == dominant) {
            ++bucket.plants_most_common;
            ++g.plants_most_common;
          } else {
            ++g.plants_other;
          }
        }
        for (const ZapEvent& z : rec.events.zaps) {
          ++bucket.zaps;
          ++report.groups[group_of[z.zapper]].zaps;
        }
        for (int i = 0; i < n; ++i) {
          report.player_returns[i] += rec.rewards[i];
          report.groups[group_of[i]].returns += rec.rewards[i];
        }
        const Signature s = ComputeSignature(rec.color_counts);
        for (int c = 0; c < k; ++c) bucket.mean_signature[c] += s[c];
        bucket.mean_monoculture += MonocultureFraction(rec.color_counts);
        bucket.mean_entropy += BerryEntropy(rec.color_counts);
      }
      const double len = static_cast<double>(bucket.end - bucket.start);
      for (double& v : bucket.mean_signature) v /= len;
      bucket.mean_monoculture /= len;
      bucket.mean_entropy /= len;
      for (int c = 0; c < k; ++c) {
        report.eats_by_color[c] += bucket.eats_by_color[c];
        report.plants_by_color[c] += bucket.plants_by_color[c];
      }
      report.plants_most_common += bucket.plants_most_common;
      report.zaps += bucket.zaps;
      report.buckets.push_back(std::move(bucket));
    }
  }
  return report;
}

std::string FormatDouble(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

std::string BucketTableCsv(const TallyReport& report) {
  std::ostringstream out;
  const int k = report.num_colors;
  out << "log,start,end,eats,plants,plants_most_common,zaps";
  for (int c = 0; c < k; ++c) out << ",eats_c" << c;
  for (int c = 0; c < k; ++c) out << ",plants_c" << c;
  for (int c = 0; c < k; ++c) out << ",signature_c" << c;
  out << ",monoculture,entropy\n";
  for (const TallyBucket& b : report.buckets) {
    const int64_t eats = std::accumulate(b.eats_by_color.begin(),
                                         b.eats_by_color.end(), int64_t{0});
    const int64_t plants = std::accumulate(
        b.plants_by_color.begin(), b.plants_by_color.end(), int64_t{0});
    out << b.log_index << ',' << b.start << ',' << b.end << ',' << eats << ','
        << plants << ',' << b.plants_most_common << ',' << b.zaps;
    for (int64_t v : b.eats_by_color) out << ',' << v;
    for (int64_t v : b.plants_by_color) out << ',' << v;
    for (double v : b.mean_signature) out << ',' << FormatDouble(v);
    out << ',' << FormatDouble(b.mean_monoculture) << ','
        << FormatDouble(b.mean_entropy) << '\n';
  }
  return out.str();
}

}  // namespace ah
