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

#include "ah/observation.h"

#include <algorithm>

namespace ah {
namespace {

constexpr Rgb kWallColor{70, 70, 70};
constexpr Rgb kNeutralColor{128, 128, 128};

void FillRect(std::vector<uint8_t>& image, int row, int col, int r0, int r1,
              Rgb color) {
  for (int y = r0; y < r1; ++y) {
    for (int x = r0; x < r1; ++x) {
      const int py = row * kSpritePixels + y;
      const int px = col * kSpritePixels + x;
      uint8_t* pixel = &image[(py * kRgbSide + px) * 3];
      pixel[0] = color[0];
      pixel[1] = color[1];
      pixel[2] = color[2];
    }
  }
}

void DrawPlayer(std::vector<uint8_t>& image, int row, int col, Rgb color,
                bool self) {
  for (int y = 0; y < kSpritePixels; ++y) {
    for (int x = 0; x < kSpritePixels; ++x) {
      const bool border =
          y == 0 || x == 0 || y == kSpritePixels - 1 || x == kSpritePixels - 1;
      if (!border && !(self && y >= 3 && y <= 4 && x >= 3 && x <= 4)) {
        continue;
      }
      const int py = row * kSpritePixels + y;
      const int px = col * kSpritePixels + x;
      uint8_t* pixel = &image[(py * kRgbSide + px) * 3];
      pixel[0] = color[0];
      pixel[1] = color[1];
      pixel[2] = color[2];
    }
  }
}

Rgb Dim(Rgb c) {
  return {static_cast<uint8_t>(c[0] * 2 / 5), static_cast<uint8_t>(c[1] * 2 / 5),
          static_cast<uint8_t>(c[2] * 2 / 5)};
}

}  // namespace

Position WindowToWorld(Position pos, Orientation o, int row, int col) {
  const int ahead = kSelfRow - row;
  const int lateral = col - kSelfCol;
  const Position f = Forward(o);
  const Position r = Right(o);
  return {pos.x + f.x * ahead + r.x * lateral,
          pos.y + f.y * ahead + r.y * lateral};
}

Observation RenderObservation(const EnvConfig& config, const EnvState& state,
                              int player, ObservationMode mode) {
  Observation obs;
  obs.mode = mode;
  obs.num_colors = config.num_colors;
  const PlayerState& self = state.players[player];
  obs.orientation = self.orientation;
  if (config.zap_cooldown > 0) {
    const int wait = std::max(0, self.zap_ready_at - state.step);
    obs.zap_cooldown =
        std::min(1.0, static_cast<double>(wait) / config.zap_cooldown);
  }
  const ChannelLayout layout = obs.layout();
  const int channels = layout.count();
  if (mode == ObservationMode::kSymbolic) {
    obs.symbolic.assign(kWindowRows * kWindowCols * channels, 0);
  } else {
    obs.rgb.assign(kRgbSide * kRgbSide * 3, 0);
  }

  for (int row = 0; row < kWindowRows; ++row) {
    for (int col = 0; col < kWindowCols; ++col) {
      const Position p =
          WindowToWorld(self.position, self.orientation, row, col);
      const bool is_self =
          row == kSelfRow && col == kSelfCol && !self.removed;
      if (state.IsWall(p)) {
        if (mode == ObservationMode::kSymbolic) {
          obs.symbolic[(row * kWindowCols + col) * channels + layout.wall()] =
              1;
        } else {
          FillRect(obs.rgb, row, col, 0, kSpritePixels, kWallColor);
        }
        continue;
      }
      const int cell = state.Index(p);
      const int berry = state.berry_color[cell];
      const int occupant = state.occupant[cell];
      if (mode == ObservationMode::kSymbolic) {
        uint8_t* v = &obs.symbolic[(row * kWindowCols + col) * channels];
        if (berry != kNoBerry) {
          v[layout.berry(berry)] = 1;
          v[layout.ripe()] = state.ripe[cell];
        }
        if (occupant != kNoPlayer) {
          v[layout.player()] = 1;
          v[layout.avatar(state.players[occupant].avatar_color)] = 1;
        }
        if (is_self) v[layout.self()] = 1;
      } else {
        if (berry != kNoBerry) {
          const Rgb c = config.color_palette[berry];
          if (state.ripe[cell]) {
            FillRect(obs.rgb, row, col, 1, kSpritePixels - 1, c);
          } else {
            FillRect(obs.rgb, row, col, 2, kSpritePixels - 2, Dim(c));
          }
        }
        if (occupant != kNoPlayer) {
          const int avatar = state.players[occupant].avatar_color;
          DrawPlayer(obs.rgb, row, col,
                     avatar == kNeutralAvatar ? kNeutralColor
                                              : config.color_palette[avatar],
                     is_self);
        }
      }
    }
  }
  return obs;
}

std::vector<Observation> RenderAllSerial(const EnvConfig& config,
                                         const EnvState& state,
                                         ObservationMode mode) {
  std::vector<Observation> out(config.num_players);
  for (int i = 0; i < config.num_players; ++i) {
    out[i] = RenderObservation(config, state, i, mode);
  }
  return out;
}

std::vector<Observation> RenderAllParallel(const EnvConfig& config,
                                           const EnvState& state,
                                           ObservationMode mode) {
  std::vector<Observation> out(config.num_players);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < config.num_players; ++i) {
    out[i] = RenderObservation(config, state, i, mode);
  }
  return out;
}

StepOutput StepAndObserve(Environment& env,
                          std::span<const Action> joint_action) {
  StepResult r = env.Step(joint_action);
  return {std::move(r.rewards), std::move(r.events),
          RenderAllParallel(env.config(), env.state(),
                            env.config().observation_mode)};
}

}  // namespace ah
