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

#ifndef AH_CONFIG_IO_H_
#define AH_CONFIG_IO_H_

#include <string>

#include "ah/agents.h"
#include "ah/env_config.h"
#include "ah/metrics.h"
#include "json.hpp"

namespace ah {

using Json = nlohmann::ordered_json;

// JSON forms of the configuration types. Readers accept partial documents
// (missing keys keep their defaults) and throw InvalidConfig naming the
// offending key.
Json ToJson(const RewardProfile& profile);
Json ToJson(const EnvConfig& config);
Json ToJson(const GroupSpec& groups);
Json ToJson(const ActorCriticParams& params);
Json ToJson(const AgentSpec& spec);
Json ToJson(const Resampling& resampling);

RewardProfile RewardProfileFromJson(const Json& json);
EnvConfig EnvConfigFromJson(const Json& json);
GroupSpec GroupSpecFromJson(const Json& json);
ActorCriticParams ActorCriticParamsFromJson(const Json& json);
AgentSpec AgentSpecFromJson(const Json& json);
Resampling ResamplingFromJson(const Json& json);

// Parses text, wrapping syntax errors in InvalidConfig.
Json ParseJson(const std::string& text);
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace ah

#endif  // AH_CONFIG_IO_H_
