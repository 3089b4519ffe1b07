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

#include "ah/config_io.h"

#include <fstream>
#include <sstream>

#include "ah/errors.h"

namespace ah {
namespace {

// Reads json[key] into `out` if present.
template <typename T>
void Get(const Json& json, const char* key, T& out) {
  auto it = json.find(key);
  if (it == json.end()) return;
  try {
    out = it->template get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string(key) + ": " + e.what());
  }
}

void RequireObject(const Json& json, const char* what) {
  if (!json.is_object()) {
    throw InvalidConfig(std::string(what) + ": expected an object");
  }
}

template <typename T, typename F>
void GetWith(const Json& json, const char* key, T& out, F parse) {
  auto it = json.find(key);
  if (it == json.end()) return;
  try {
    out = parse(*it);
  } catch (const InvalidConfig&) {
    throw;
  } catch (const std::exception& e) {
    throw InvalidConfig(std::string(key) + ": " + e.what());
  }
}

std::string OptimizerName(OptimizerKind kind) {
  return kind == OptimizerKind::kRmsProp ? "rmsprop" : "sgd";
}

OptimizerKind ParseOptimizer(const std::string& name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "rmsprop") return OptimizerKind::kRmsProp;
  throw InvalidConfig("optimizer: unknown optimizer '" + name + "'");
}

}  // namespace

Json ToJson(const RewardProfile& profile) {
  return Json(profile.per_color_reward);
}

RewardProfile RewardProfileFromJson(const Json& json) {
  if (!json.is_array()) throw InvalidConfig("profile: expected an array");
  RewardProfile profile;
  try {
    profile.per_color_reward = json.get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("profile: ") + e.what());
  }
  return profile;
}

Json ToJson(const EnvConfig& c) {
  Json j;
  j["grid_width"] = c.grid_width;
  j["grid_height"] = c.grid_height;
  j["wall_layout"] = ToString(c.wall_layout);
  j["num_players"] = c.num_players;
  j["berry_total"] = c.berry_total;
  j["num_colors"] = c.num_colors;
  j["initial_color_counts"] = c.initial_color_counts;
  j["ripen_c1"] = c.ripen_c1;
  j["ripen_c3"] = c.ripen_c3;
  j["episode_length"] = c.episode_length;
  j["zap_removal"] = c.zap_removal;
  j["zap_cooldown"] = c.zap_cooldown;
  j["beam_length"] = c.beam_length;
  j["beam_width"] = c.beam_width;
  j["zap_enabled"] = c.zap_enabled;
  Json palette = Json::array();
  for (const Rgb& rgb : c.color_palette) {
    palette.push_back({rgb[0], rgb[1], rgb[2]});
  }
  j["color_palette"] = palette;
  Json profiles = Json::array();
  for (const RewardProfile& p : c.reward_profiles) profiles.push_back(ToJson(p));
  j["reward_profiles"] = profiles;
  j["observation_mode"] = ToString(c.observation_mode);
  j["seed"] = c.seed;
  return j;
}

EnvConfig EnvConfigFromJson(const Json& j) {
  RequireObject(j, "env");
  EnvConfig c;
  Get(j, "grid_width", c.grid_width);
  Get(j, "grid_height", c.grid_height);
  GetWith(j, "wall_layout", c.wall_layout, [](const Json& v) {
    return ParseWallLayout(v.get<std::string>());
  });
  Get(j, "num_players", c.num_players);
  Get(j, "berry_total", c.berry_total);
  Get(j, "num_colors", c.num_colors);
  Get(j, "initial_color_counts", c.initial_color_counts);
  Get(j, "ripen_c1", c.ripen_c1);
  Get(j, "ripen_c3", c.ripen_c3);
  Get(j, "episode_length", c.episode_length);
  Get(j, "zap_removal", c.zap_removal);
  Get(j, "zap_cooldown", c.zap_cooldown);
  Get(j, "beam_length", c.beam_length);
  Get(j, "beam_width", c.beam_width);
  Get(j, "zap_enabled", c.zap_enabled);
  GetWith(j, "color_palette", c.color_palette, [](const Json& v) {
    std::vector<Rgb> palette;
    for (const Json& rgb : v) {
      const auto a = rgb.get<std::vector<int>>();
      if (a.size() != 3) throw InvalidConfig("color_palette: need 3 channels");
      Rgb out{};
      for (int ch = 0; ch < 3; ++ch) {
        if (a[ch] < 0 || a[ch] > 255) {
          throw InvalidConfig("color_palette: channel out of [0, 255]");
        }
        out[ch] = static_cast<uint8_t>(a[ch]);
      }
      palette.push_back(out);
    }
    return palette;
  });
  GetWith(j, "reward_profiles", c.reward_profiles, [](const Json& v) {
    std::vector<RewardProfile> profiles;
    for (const Json& p : v) profiles.push_back(RewardProfileFromJson(p));
    return profiles;
  });
  GetWith(j, "observation_mode", c.observation_mode, [](const Json& v) {
    return ParseObservationMode(v.get<std::string>());
  });
  Get(j, "seed", c.seed);
  return c;
}

Json ToJson(const GroupSpec& groups) {
  Json out = Json::array();
  for (const Group& g : groups.groups) {
    Json j;
    j["preferred_color"] =
        g.preferred_color ? Json(*g.preferred_color) : Json(nullptr);
    j["members"] = g.members;
    j["profile"] = ToJson(g.profile);
    out.push_back(j);
  }
  return out;
}

GroupSpec GroupSpecFromJson(const Json& json) {
  if (!json.is_array()) throw InvalidConfig("groups: expected an array");
  GroupSpec spec;
  for (const Json& j : json) {
    RequireObject(j, "groups");
    Group g;
    auto it = j.find("preferred_color");
    if (it != j.end() && !it->is_null()) {
      GetWith(j, "preferred_color", g.preferred_color,
              [](const Json& v) { return std::optional<int>(v.get<int>()); });
    }
    Get(j, "members", g.members);
    GetWith(j, "profile", g.profile, RewardProfileFromJson);
    spec.groups.push_back(std::move(g));
  }
  return spec;
}

Json ToJson(const ActorCriticParams& p) {
  Json j;
  j["gamma"] = p.gamma;
  j["learning_rate"] = p.learning_rate;
  j["entropy_weight"] = p.entropy_weight;
  j["value_weight"] = p.value_weight;
  j["hidden_size"] = p.hidden_size;
  j["segment_length"] = p.segment_length;
  j["optimizer"] = OptimizerName(p.optimizer);
  j["rms_decay"] = p.rms_decay;
  j["rms_epsilon"] = p.rms_epsilon;
  j["max_grad_norm"] = p.max_grad_norm;
  return j;
}

ActorCriticParams ActorCriticParamsFromJson(const Json& j) {
  RequireObject(j, "network");
  ActorCriticParams p;
  Get(j, "gamma", p.gamma);
  Get(j, "learning_rate", p.learning_rate);
  Get(j, "entropy_weight", p.entropy_weight);
  Get(j, "value_weight", p.value_weight);
  Get(j, "hidden_size", p.hidden_size);
  Get(j, "segment_length", p.segment_length);
  GetWith(j, "optimizer", p.optimizer,
          [](const Json& v) { return ParseOptimizer(v.get<std::string>()); });
  Get(j, "rms_decay", p.rms_decay);
  Get(j, "rms_epsilon", p.rms_epsilon);
  Get(j, "max_grad_norm", p.max_grad_norm);
  return p;
}

Json ToJson(const AgentSpec& s) {
  Json j;
  j["kind"] = ToString(s.kind);
  j["profile"] = ToJson(s.profile);
  j["target_color"] = s.target_color ? Json(*s.target_color) : Json(nullptr);
  j["plant_budget"] = s.plant_budget;
  if (s.kind == AgentKind::kLearner) {
    j["network"] = ToJson(s.learner.network);
    j["features"] = ToString(s.learner.features);
  }
  return j;
}

AgentSpec AgentSpecFromJson(const Json& j) {
  RequireObject(j, "agents");
  AgentSpec s;
  GetWith(j, "kind", s.kind,
          [](const Json& v) { return ParseAgentKind(v.get<std::string>()); });
  GetWith(j, "profile", s.profile, RewardProfileFromJson);
  auto it = j.find("target_color");
  if (it != j.end() && !it->is_null()) {
    GetWith(j, "target_color", s.target_color,
            [](const Json& v) { return std::optional<int>(v.get<int>()); });
  }
  Get(j, "plant_budget", s.plant_budget);
  GetWith(j, "network", s.learner.network, ActorCriticParamsFromJson);
  GetWith(j, "features", s.learner.features, [](const Json& v) {
    return ParseFeatureSet(v.get<std::string>());
  });
  return s;
}

Json ToJson(const Resampling& r) {
  Json j;
  j["pooled"] = r.pooled;
  j["pool_size"] = r.pool_size;
  j["group_counts"] = r.group_counts;
  return j;
}

Resampling ResamplingFromJson(const Json& j) {
  RequireObject(j, "resampling");
  Resampling r;
  Get(j, "pooled", r.pooled);
  Get(j, "pool_size", r.pool_size);
  Get(j, "group_counts", r.group_counts);
  return r;
}

Json ParseJson(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidConfig(std::string("json: ") + e.what());
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot write " + path);
  out << contents;
  if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace ah
