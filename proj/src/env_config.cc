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

#include "ah/env_config.h"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "ah/errors.h"

namespace ah {
namespace {

void Require(bool condition, const std::string& field,
             const std::string& what) {
  if (!condition) throw InvalidConfig(field + ": " + what);
}

}  // namespace

std::string ToString(WallLayout layout) {
  switch (layout) {
    case WallLayout::kBorder:
      return "border";
    case WallLayout::kQuadrants:
      return "quadrants";
  }
  return "border";
}

std::string ToString(ObservationMode mode) {
  return mode == ObservationMode::kRgb ? "rgb" : "symbolic";
}

WallLayout ParseWallLayout(const std::string& name) {
  if (name == "border" || name == "empty") return WallLayout::kBorder;
  if (name == "quadrants") return WallLayout::kQuadrants;
  throw InvalidConfig("wall_layout: unknown layout '" + name + "'");
}

ObservationMode ParseObservationMode(const std::string& name) {
  if (name == "symbolic") return ObservationMode::kSymbolic;
  if (name == "rgb") return ObservationMode::kRgb;
  throw InvalidConfig("observation_mode: unknown mode '" + name + "'");
}

RewardProfile RewardProfile::Preferring(int color, int num_colors,
                                        double preferred, double other) {
  RewardProfile profile{std::vector<double>(num_colors, other)};
  profile.per_color_reward[color] = preferred;
  return profile;
}

RewardProfile RewardProfile::Uniform(int num_colors, double reward) {
  return RewardProfile{std::vector<double>(num_colors, reward)};
}

std::optional<int> RewardProfile::PreferredColor() const {
  if (per_color_reward.empty()) return std::nullopt;
  auto best = std::max_element(per_color_reward.begin(),
                               per_color_reward.end());
  if (std::count(per_color_reward.begin(), per_color_reward.end(), *best) >
      1) {
    return std::nullopt;
  }
  return static_cast<int>(best - per_color_reward.begin());
}

double CalibratedRipenC3(int berry_total) {
  if (berry_total <= 0) throw InvalidArgument("berry total must be positive");
  const double scale = 685.0 / berry_total;
  return kCalibratedRipenC3 * scale * scale * scale;
}

std::vector<Rgb> DefaultPalette() {
  return {Rgb{200, 100, 50}, Rgb{50, 200, 100}, Rgb{100, 50, 200},
          Rgb{100, 200, 50}, Rgb{200, 50, 100}};
}

std::vector<RewardProfile> EnvConfig::DefaultProfiles() {
  std::vector<RewardProfile> profiles;
  for (int i = 0; i < 24; ++i) {
    profiles.push_back(RewardProfile::Preferring(i / 6, 5));
  }
  return profiles;
}

std::vector<uint8_t> BuildWalls(const EnvConfig& config) {
  const int w = config.grid_width;
  const int h = config.grid_height;
  std::vector<uint8_t> walls(static_cast<size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) walls[y * w + x] = 1;
    }
  }
  if (config.wall_layout == WallLayout::kQuadrants) {
    // One vertical and one horizontal wall line through the middle, with a
    // three-cell opening around the crossing.
    const int cx = w / 2;
    const int cy = h / 2;
    for (int y = 1; y < h - 1; ++y) {
      if (std::abs(y - cy) > 1) walls[y * w + cx] = 1;
    }
    for (int x = 1; x < w - 1; ++x) {
      if (std::abs(x - cx) > 1) walls[cy * w + x] = 1;
    }
  }
  return walls;
}

void EnvConfig::Validate() const {
  Require(grid_width >= 3, "grid_width", "must be at least 3");
  Require(grid_height >= 3, "grid_height", "must be at least 3");
  Require(num_players >= 1, "num_players", "must be at least 1");
  Require(num_colors >= 1, "num_colors", "must be at least 1");
  Require(num_colors <= 100, "num_colors", "must be at most 100");
  Require(berry_total >= 0, "berry_total", "must be non-negative");
  Require(episode_length > 0, "episode_length", "must be positive");
  Require(beam_length >= 1, "beam_length", "must be at least 1");
  Require(beam_width >= 1 && beam_width % 2 == 1, "beam_width",
          "must be a positive odd number");
  Require(zap_removal >= 0, "zap_removal", "must be non-negative");
  Require(zap_cooldown >= 0, "zap_cooldown", "must be non-negative");
  Require(ripen_c1 >= 0.0, "ripen_c1", "must be non-negative");
  Require(ripen_c3 >= 0.0, "ripen_c3", "must be non-negative");
  Require(static_cast<int>(initial_color_counts.size()) == num_colors,
          "initial_color_counts", "needs one count per color");
  for (int c : initial_color_counts) {
    Require(c >= 0, "initial_color_counts", "counts must be non-negative");
  }
  Require(std::accumulate(initial_color_counts.begin(),
                          initial_color_counts.end(), 0) == berry_total,
          "initial_color_counts", "must sum to berry_total");
  Require(static_cast<int>(color_palette.size()) == num_colors,
          "color_palette", "needs one RGB triple per color");
  Require(static_cast<int>(reward_profiles.size()) == num_players,
          "reward_profiles", "needs one profile per player");
  for (const RewardProfile& profile : reward_profiles) {
    Require(profile.num_colors() == num_colors, "reward_profiles",
            "each profile needs one reward per color");
    for (double r : profile.per_color_reward) {
      Require(r > 0.0, "reward_profiles", "rewards must be positive");
    }
  }
  const std::vector<uint8_t> walls = BuildWalls(*this);
  const int open = static_cast<int>(std::count(walls.begin(), walls.end(), 0));
  Require(berry_total + num_players <= open, "berry_total",
          "berries plus players exceed the number of open cells");
}

}  // namespace ah
