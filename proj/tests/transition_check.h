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

#ifndef AH_TESTS_TRANSITION_CHECK_H_
#define AH_TESTS_TRANSITION_CHECK_H_

#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ah/environment.h"

namespace ah::check {

// Everything that must hold across one transition, judged from the states
// on either side. Returns one message per violation.
inline std::vector<std::string> StepViolations(const EnvConfig& config,
                                               const EnvState& before,
                                               std::span<const Action> joint,
                                               const StepResult& result,
                                               const EnvState& after) {
  std::vector<std::string> bad;
  const int total = std::accumulate(after.color_counts.begin(),
                                    after.color_counts.end(), 0);
  if (total != config.berry_total) bad.push_back("berry total changed");

  std::set<int> eaten;
  for (const EatEvent& e : result.events.eats) {
    if (!eaten.insert(e.cell).second) bad.push_back("cell eaten twice");
    if (before.berry_color[e.cell] != e.color) bad.push_back("eat color");
    if (!before.ripe[e.cell]) bad.push_back("unripe berry eaten");
    if (after.berry_color[e.cell] != e.color) bad.push_back("eat recolored");
    if (before.players[e.player].removed) bad.push_back("removed player ate");
    if (after.Index(after.players[e.player].position) != e.cell) {
      bad.push_back("eater not on the cell");
    }
  }
  // Each eat makes exactly one ripe berry unripe; only ripening undoes it.
  std::set<int> ripened(result.events.ripenings.begin(),
                        result.events.ripenings.end());
  for (int cell : ripened) {
    if (before.ripe[cell] && !eaten.count(cell)) {
      bad.push_back("ripe berry ripened again");
    }
  }
  for (int cell : eaten) {
    if (after.ripe[cell] != static_cast<uint8_t>(ripened.count(cell))) {
      bad.push_back("eaten berry ripe without ripening");
    }
  }
  const int ripe_before = std::accumulate(before.ripe_counts.begin(),
                                          before.ripe_counts.end(), 0);
  const int ripe_after = std::accumulate(after.ripe_counts.begin(),
                                         after.ripe_counts.end(), 0);
  if (ripe_after != ripe_before - static_cast<int>(eaten.size()) +
                        static_cast<int>(ripened.size())) {
    bad.push_back("ripe count off");
  }

  // Beams fire in player order, so one cell can be recolored twice.
  std::vector<int8_t> running = before.berry_color;
  for (const PlantEvent& p : result.events.plants) {
    if (before.ripe[p.cell]) bad.push_back("ripe berry recolored");
    if (running[p.cell] != p.old_color) bad.push_back("old color");
    running[p.cell] = static_cast<int8_t>(p.new_color);
    if (p.old_color == p.new_color) bad.push_back("no-op plant recorded");
    if (before.players[p.player].removed) {
      bad.push_back("removed player planted");
    }
    if (!IsPlant(joint[p.player], config.num_colors) ||
        PlantColor(joint[p.player]) != p.new_color) {
      bad.push_back("plant without the matching action");
    }
  }
  const int cells = before.width * before.height;
  for (int cell = 0; cell < cells; ++cell) {
    if (before.berry_color[cell] == kNoBerry) {
      if (after.berry_color[cell] != kNoBerry) bad.push_back("berry appeared");
      continue;
    }
    if (after.berry_color[cell] == kNoBerry) bad.push_back("berry vanished");
    if (running[cell] != after.berry_color[cell]) {
      bad.push_back("recolor does not match the plant events");
    }
    if (before.ripe[cell] && !after.ripe[cell] && !eaten.count(cell)) {
      bad.push_back("berry unripened without an eat");
    }
  }

  for (const ZapEvent& z : result.events.zaps) {
    if (before.players[z.zapper].removed) bad.push_back("removed player zapped");
    if (!config.zap_enabled) bad.push_back("zap while disabled");
    if (!after.players[z.victim].removed) bad.push_back("victim still present");
  }
  for (size_t i = 0; i < after.players.size(); ++i) {
    const PlayerState& b = before.players[i];
    const PlayerState& a = after.players[i];
    if (a.removed && after.occupant[after.Index(a.position)] ==
                         static_cast<int16_t>(i)) {
      bad.push_back("removed player occupies a cell");
    }
    if (b.removed && a.avatar_color != b.avatar_color) {
      bad.push_back("removed player changed color");
    }
    if (!b.removed && !a.removed && IsPlant(joint[i], config.num_colors) &&
        a.avatar_color != PlantColor(joint[i])) {
      bad.push_back("planter avatar color");
    }
    if (b.removed && !a.removed && a.orientation != Orientation::kNorth) {
      bad.push_back("respawn orientation");
    }
  }
  if (after.step != before.step + 1) bad.push_back("clock");
  return bad;
}

}  // namespace ah::check

#endif  // AH_TESTS_TRANSITION_CHECK_H_
