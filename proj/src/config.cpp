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

#include "emorec/config.hpp"

#include <fstream>
#include <string>

#include "json.hpp"

namespace emorec {
namespace {

using nlohmann::ordered_json;

// Moves one key out of the section if present; whatever keys remain
// afterwards are unknown and rejected.
template <typename T>
void take(ordered_json* section, const std::string& where, const char* key,
          T* out) {
  auto it = section->find(key);
  if (it == section->end()) return;
  try {
    *out = it->get<T>();
  } catch (const ordered_json::exception&) {
    throw ConfigError("config key " + where + "." + key +
                      " has the wrong type");
  }
  section->erase(it);
}

void finish_section(const ordered_json& section, const std::string& where) {
  if (!section.empty()) {
    throw ConfigError("unknown config key " + where + "." +
                      section.begin().key());
  }
}

ordered_json grab_section(ordered_json* root, const char* name) {
  auto it = root->find(name);
  if (it == root->end()) return ordered_json::object();
  if (!it->is_object()) {
    throw ConfigError(std::string("config section ") + name +
                      " must be an object");
  }
  ordered_json section = *it;
  root->erase(it);
  return section;
}

}  // namespace

std::string dump_config(const PipelineConfig& c) {
  ordered_json j;
  j["vad"] = {{"trend_window_ms", c.vad.trend_window_ms},
              {"frame_ms", c.vad.frame_ms},
              {"shift_ms", c.vad.shift_ms},
              {"n_fft", c.vad.n_fft},
              {"f0_min_hz", c.vad.f0_min_hz},
              {"f0_max_hz", c.vad.f0_max_hz},
              {"n_harmonics", c.vad.n_harmonics},
              {"threshold", c.vad.threshold},
              {"min_region_ms", c.vad.min_region_ms},
              {"bridge_ms", c.vad.bridge_ms}};
  j["ztw"] = {{"segment_ms", c.ztw.segment_ms},
              {"n_fft", c.ztw.n_fft},
              {"n_peaks", c.ztw.n_peaks},
              {"smooth_width", c.ztw.smooth_width}};
  j["mfcc"] = {{"frame_ms", c.mfcc.frame_ms},
               {"shift_ms", c.mfcc.shift_ms},
               {"n_fft", c.mfcc.n_fft},
               {"n_filters", c.mfcc.n_filters},
               {"mel_lo_hz", c.mfcc.mel_lo_hz},
               {"mel_hi_hz", c.mfcc.mel_hi_hz},
               {"log_floor", c.mfcc.log_floor},
               {"n_coeffs", c.mfcc.n_coeffs}};
  j["features"] = {{"splice_context", c.splice_context}};
  j["lda"] = {{"enabled", c.use_lda}, {"dim", c.lda_dim}};
  j["gmm"] = {{"mixes", c.gmm_mixes}};
  j["mlp"] = {{"hidden", c.mlp.hidden},
              {"lr_start", c.mlp.lr_start},
              {"lr_end", c.mlp.lr_end},
              {"epochs_decay", c.mlp.epochs_decay},
              {"epochs_extra", c.mlp.epochs_extra},
              {"batch_size", c.mlp.batch_size},
              {"seed", c.mlp.seed}};
  j["topology"] = {{"emotions", c.emotions},
                   {"states_per_emotion", c.states_per_emotion}};
  return j.dump(2) + "\n";
}

PipelineConfig parse_config(const std::string& json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");

  PipelineConfig c;
  ordered_json s = grab_section(&root, "vad");
  take(&s, "vad", "trend_window_ms", &c.vad.trend_window_ms);
  take(&s, "vad", "frame_ms", &c.vad.frame_ms);
  take(&s, "vad", "shift_ms", &c.vad.shift_ms);
  take(&s, "vad", "n_fft", &c.vad.n_fft);
  take(&s, "vad", "f0_min_hz", &c.vad.f0_min_hz);
  take(&s, "vad", "f0_max_hz", &c.vad.f0_max_hz);
  take(&s, "vad", "n_harmonics", &c.vad.n_harmonics);
  take(&s, "vad", "threshold", &c.vad.threshold);
  take(&s, "vad", "min_region_ms", &c.vad.min_region_ms);
  take(&s, "vad", "bridge_ms", &c.vad.bridge_ms);
  finish_section(s, "vad");

  s = grab_section(&root, "ztw");
  take(&s, "ztw", "segment_ms", &c.ztw.segment_ms);
  take(&s, "ztw", "n_fft", &c.ztw.n_fft);
  take(&s, "ztw", "n_peaks", &c.ztw.n_peaks);
  take(&s, "ztw", "smooth_width", &c.ztw.smooth_width);
  finish_section(s, "ztw");

  s = grab_section(&root, "mfcc");
  take(&s, "mfcc", "frame_ms", &c.mfcc.frame_ms);
  take(&s, "mfcc", "shift_ms", &c.mfcc.shift_ms);
  take(&s, "mfcc", "n_fft", &c.mfcc.n_fft);
  take(&s, "mfcc", "n_filters", &c.mfcc.n_filters);
  take(&s, "mfcc", "mel_lo_hz", &c.mfcc.mel_lo_hz);
  take(&s, "mfcc", "mel_hi_hz", &c.mfcc.mel_hi_hz);
  take(&s, "mfcc", "log_floor", &c.mfcc.log_floor);
  take(&s, "mfcc", "n_coeffs", &c.mfcc.n_coeffs);
  finish_section(s, "mfcc");

  s = grab_section(&root, "features");
  take(&s, "features", "splice_context", &c.splice_context);
  finish_section(s, "features");

  s = grab_section(&root, "lda");
  take(&s, "lda", "enabled", &c.use_lda);
  take(&s, "lda", "dim", &c.lda_dim);
  finish_section(s, "lda");

  s = grab_section(&root, "gmm");
  take(&s, "gmm", "mixes", &c.gmm_mixes);
  finish_section(s, "gmm");

  s = grab_section(&root, "mlp");
  take(&s, "mlp", "hidden", &c.mlp.hidden);
  take(&s, "mlp", "lr_start", &c.mlp.lr_start);
  take(&s, "mlp", "lr_end", &c.mlp.lr_end);
  take(&s, "mlp", "epochs_decay", &c.mlp.epochs_decay);
  take(&s, "mlp", "epochs_extra", &c.mlp.epochs_extra);
  take(&s, "mlp", "batch_size", &c.mlp.batch_size);
  take(&s, "mlp", "seed", &c.mlp.seed);
  finish_section(s, "mlp");

  s = grab_section(&root, "topology");
  take(&s, "topology", "emotions", &c.emotions);
  take(&s, "topology", "states_per_emotion", &c.states_per_emotion);
  finish_section(s, "topology");

  if (!root.empty()) {
    throw ConfigError("unknown config key " + root.begin().key());
  }
  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path);
  return parse_config(text);
}

SystemConfig system_config(const PipelineConfig& config) {
  SystemConfig sys;
  sys.topo = default_topology(config.emotions, config.states_per_emotion);
  sys.gmm_mixes = config.gmm_mixes;
  sys.use_lda = config.use_lda;
  sys.splice_context = config.splice_context;
  sys.lda_dim = config.lda_dim;
  sys.mlp = config.mlp;
  return sys;
}

}  // namespace emorec
