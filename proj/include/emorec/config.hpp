// Copyright 2026 The Emorec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// One JSON document for every pipeline tunable, grouped by module. A
// missing key keeps its default; an unknown key is an error, so typos
// cannot silently fall back to defaults. dump_config and parse_config
// round-trip exactly.

#ifndef EMOREC_CONFIG_HPP_
#define EMOREC_CONFIG_HPP_

#include <string>
#include <vector>

#include "emorec/decode.hpp"
#include "emorec/epoch.hpp"
#include "emorec/features.hpp"
#include "emorec/mlp.hpp"
#include "emorec/vad.hpp"

namespace emorec {

struct PipelineConfig {
  VadConfig vad;
  ZtwConfig ztw;
  MfccConfig mfcc;
  int splice_context = 4;
  bool use_lda = true;
  int lda_dim = kDefaultLdaDim;
  int gmm_mixes = 2;
  MlpConfig mlp;
  std::vector<std::string> emotions = {"angry", "happy", "neutral", "sad"};
  int states_per_emotion = 5;
};

/// Effective settings as pretty-printed JSON with every key present.
std::string dump_config(const PipelineConfig& config);

/// Parses a JSON document over the defaults. Unknown or ill-typed keys
/// throw ConfigError naming the key.
PipelineConfig parse_config(const std::string& json_text);

/// Reads and parses a config file; IoError when unreadable.
PipelineConfig load_config(const std::string& path);

/// The classifier view of the pipeline settings.
SystemConfig system_config(const PipelineConfig& config);

}  // namespace emorec

#endif  // EMOREC_CONFIG_HPP_
