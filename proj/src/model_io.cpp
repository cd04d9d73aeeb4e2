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

#include "emorec/model_io.hpp"

#include <cstdint>
#include <fstream>
#include <string>

#include "wire.hpp"

namespace emorec {
namespace {

constexpr char kMagic[4] = {'E', 'M', 'H', 'M'};
constexpr uint32_t kVersion = 1;
// Caps that keep a corrupt header from driving huge allocations.
constexpr uint32_t kMaxCount = 1u << 20;

uint32_t checked_count(uint32_t v, const char* what) {
  if (v > kMaxCount) {
    throw IoError(std::string("implausible ") + what + " count");
  }
  return v;
}

}  // namespace

std::string recognizer_to_bytes(const Recognizer& model) {
  validate(model.topo);
  validate(model.mlp);
  const int S = model.topo.states_per_emotion;
  const size_t n_emotions = model.topo.emotions.size();
  if (model.gmm.size() != n_emotions) {
    throw IoError("recognizer needs one GMM set per emotion");
  }

  std::string bytes;
  bytes.append(kMagic, 4);
  wire::put_u32(&bytes, kVersion);

  wire::put_u32(&bytes, static_cast<uint32_t>(n_emotions));
  for (const std::string& name : model.topo.emotions) {
    wire::put_u32(&bytes, static_cast<uint32_t>(name.size()));
    bytes.append(name);
  }
  wire::put_u32(&bytes, static_cast<uint32_t>(S));
  for (const std::vector<double>& t : model.topo.transitions) {
    for (double v : t) wire::put_f64(&bytes, v);
  }

  wire::put_u32(&bytes, static_cast<uint32_t>(model.gmm_dims));
  for (const std::vector<GmmState>& states : model.gmm) {
    if (static_cast<int>(states.size()) != S) {
      throw IoError("GMM state count does not match the topology");
    }
    for (const GmmState& st : states) {
      wire::put_u32(&bytes, static_cast<uint32_t>(st.components.size()));
      for (size_t k = 0; k < st.components.size(); ++k) {
        wire::put_f64(&bytes, st.weights[k]);
        for (double v : st.components[k].mean) wire::put_f64(&bytes, v);
        for (double v : st.components[k].var) wire::put_f64(&bytes, v);
      }
    }
  }

  wire::put_u32(&bytes, model.use_lda ? 1 : 0);
  if (model.use_lda) {
    wire::put_u32(&bytes, static_cast<uint32_t>(model.lda.class_count));
    wire::put_u32(&bytes, static_cast<uint32_t>(model.lda.input_dim));
    wire::put_u32(&bytes, static_cast<uint32_t>(model.lda.lda_dim));
    for (double v : model.lda.matrix) wire::put_f64(&bytes, v);
  }
  wire::put_u32(&bytes, static_cast<uint32_t>(model.splice_context));

  wire::put_u32(&bytes, static_cast<uint32_t>(model.mlp.layer_sizes.size()));
  for (int n : model.mlp.layer_sizes) {
    wire::put_u32(&bytes, static_cast<uint32_t>(n));
  }
  for (size_t l = 0; l < model.mlp.weights.size(); ++l) {
    for (double v : model.mlp.weights[l]) wire::put_f64(&bytes, v);
    for (double v : model.mlp.biases[l]) wire::put_f64(&bytes, v);
  }

  wire::put_u32(&bytes, static_cast<uint32_t>(model.priors.p.size()));
  for (double v : model.priors.p) wire::put_f64(&bytes, v);

  wire::put_u32(&bytes, static_cast<uint32_t>(model.feature_layout));
  wire::put_u32(&bytes, static_cast<uint32_t>(model.cmvn_scope));
  return bytes;
}

Recognizer recognizer_from_bytes(const std::string& bytes) {
  if (bytes.size() < 8 || bytes.compare(0, 4, kMagic, 4) != 0) {
    throw IoError("not an EMHM container");
  }
  wire::Cursor cur(bytes);
  cur.raw(4);
  const uint32_t version = cur.u32();
  if (version != kVersion) {
    throw IoError("unsupported EMHM version " + std::to_string(version));
  }

  Recognizer model;
  const uint32_t n_emotions = checked_count(cur.u32(), "emotion");
  model.topo.emotions.resize(n_emotions);
  for (uint32_t e = 0; e < n_emotions; ++e) {
    uint32_t len = checked_count(cur.u32(), "name byte");
    model.topo.emotions[e] = cur.raw(len);
  }
  const uint32_t S = checked_count(cur.u32(), "state");
  model.topo.states_per_emotion = static_cast<int>(S);
  model.topo.transitions.assign(n_emotions,
                                std::vector<double>(static_cast<size_t>(S) * S));
  for (uint32_t e = 0; e < n_emotions; ++e) {
    for (double& v : model.topo.transitions[e]) v = cur.f64();
  }

  model.gmm_dims = static_cast<int>(checked_count(cur.u32(), "dimension"));
  model.gmm.assign(n_emotions, std::vector<GmmState>(S));
  for (uint32_t e = 0; e < n_emotions; ++e) {
    for (uint32_t s = 0; s < S; ++s) {
      GmmState& st = model.gmm[e][s];
      const uint32_t n_comp = checked_count(cur.u32(), "component");
      st.weights.resize(n_comp);
      st.components.resize(n_comp);
      for (uint32_t k = 0; k < n_comp; ++k) {
        st.weights[k] = cur.f64();
        st.components[k].mean.resize(model.gmm_dims);
        st.components[k].var.resize(model.gmm_dims);
        for (double& v : st.components[k].mean) v = cur.f64();
        for (double& v : st.components[k].var) v = cur.f64();
      }
    }
  }

  model.use_lda = cur.u32() != 0;
  if (model.use_lda) {
    model.lda.class_count = static_cast<int>(checked_count(cur.u32(), "class"));
    model.lda.input_dim = static_cast<int>(checked_count(cur.u32(), "input"));
    model.lda.lda_dim = static_cast<int>(checked_count(cur.u32(), "output"));
    model.lda.matrix.resize(static_cast<size_t>(model.lda.lda_dim) *
                            model.lda.input_dim);
    for (double& v : model.lda.matrix) v = cur.f64();
  }
  model.splice_context = static_cast<int>(checked_count(cur.u32(), "context"));

  const uint32_t n_layers = checked_count(cur.u32(), "layer");
  model.mlp.layer_sizes.resize(n_layers);
  for (uint32_t l = 0; l < n_layers; ++l) {
    model.mlp.layer_sizes[l] = static_cast<int>(checked_count(cur.u32(), "unit"));
  }
  if (n_layers < 2) throw IoError("MLP needs at least two layers");
  model.mlp.weights.resize(n_layers - 1);
  model.mlp.biases.resize(n_layers - 1);
  for (uint32_t l = 0; l + 1 < n_layers; ++l) {
    const size_t n_in = static_cast<size_t>(model.mlp.layer_sizes[l]);
    const size_t n_out = static_cast<size_t>(model.mlp.layer_sizes[l + 1]);
    model.mlp.weights[l].resize(n_in * n_out);
    model.mlp.biases[l].resize(n_out);
    for (double& v : model.mlp.weights[l]) v = cur.f64();
    for (double& v : model.mlp.biases[l]) v = cur.f64();
  }

  const uint32_t n_priors = checked_count(cur.u32(), "prior");
  model.priors.p.resize(n_priors);
  for (double& v : model.priors.p) v = cur.f64();

  const uint32_t layout_tag = cur.u32();
  if (layout_tag > static_cast<uint32_t>(FeatureLayout::kLda)) {
    throw IoError("unknown layout tag " + std::to_string(layout_tag));
  }
  model.feature_layout = static_cast<FeatureLayout>(layout_tag);
  model.cmvn_scope = static_cast<int>(cur.u32());
  if (!cur.done()) throw IoError("trailing bytes after the container");

  try {
    validate(model.topo);
    validate(model.mlp);
  } catch (const Error& e) {
    throw IoError(std::string("invalid model payload: ") + e.what());
  }
  return model;
}

void write_recognizer(const std::string& path, const Recognizer& model) {
  const std::string bytes = recognizer_to_bytes(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path);
}

Recognizer read_recognizer(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path);
  return recognizer_from_bytes(bytes);
}

}  // namespace emorec
