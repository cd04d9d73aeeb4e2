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
// Left-to-right hidden Markov models over frame features, one five-state
// chain per emotion, with diagonal-covariance Gaussian mixture observation
// models. Training is Viterbi-EM: hard state alignment by the Viterbi
// path, then closed-form reestimation, with binary mixture splitting up to
// the requested component count. The resulting alignments provide the
// frame state labels that bootstrap the neural observation model.

#ifndef EMOREC_HMM_HPP_
#define EMOREC_HMM_HPP_

#include <string>
#include <vector>

#include "emorec/features.hpp"

namespace emorec {

struct HmmTopology {
  std::vector<std::string> emotions = {"angry", "happy", "neutral", "sad"};
  int states_per_emotion = 5;
  // Per emotion, row-major states x states, row stochastic, nonzero only
  // on the self-loop and the forward step.
  std::vector<std::vector<double>> transitions;

  int total_states() const {
    return static_cast<int>(emotions.size()) * states_per_emotion;
  }
};

/// Topology with uniform self/forward transitions (the final state loops).
HmmTopology default_topology(
    const std::vector<std::string>& emotions = {"angry", "happy", "neutral",
                                                "sad"},
    int states_per_emotion = 5);

/// Throws if rows are not stochastic within 1e-10 or mass sits anywhere
/// but the self-loop and forward step.
void validate(const HmmTopology& topo);

struct Gaussian {
  std::vector<double> mean;
  std::vector<double> var;  // diagonal, floored at 1e-6
};

struct GmmState {
  std::vector<double> weights;  // unit sum
  std::vector<Gaussian> components;
};

/// Mixture log density of one frame under a diagonal-covariance GMM.
double gmm_loglik(const GmmState& state, const double* x, int dims);

struct GmmHmm {
  HmmTopology topo;
  std::vector<std::vector<GmmState>> states;  // [emotion][state]
  int dims = 0;
};

struct LabeledUtterance {
  FeatureMatrix features;
  int emotion = 0;  // index into the topology's emotion list
  std::string speaker;
};

struct ViterbiResult {
  std::vector<int> path;
  double loglik = 0.0;
};

/// Best state path through one left-to-right chain, entry pinned to state
/// 0, in the log domain; ties resolve toward the lower state index.
/// obs_loglik holds one row per frame, one column per state; transitions
/// are probabilities and may contain zeros. Throws EmptyUtterance on zero
/// frames, UndecodableFrame when a frame scores -inf in every state.
ViterbiResult viterbi(const std::vector<std::vector<double>>& obs_loglik,
                      const std::vector<std::vector<double>>& transitions);

struct GmmTrainLog {
  // One sequence per emotion: total Viterbi loglik at the start of each
  // EM iteration, concatenated across splitting rounds.
  std::vector<std::vector<double>> iteration_loglik;
};

/// Trains one GMM-HMM per emotion by uniform-segmentation initialization
/// and Viterbi-EM, splitting mixtures up to `mixes` components per state.
/// Iteration stops when the per-frame loglik gain falls below 1e-4 or
/// after 20 iterations per splitting round. Utterances shorter than one
/// frame per state are skipped with a warning; an emotion left without
/// data throws MissingClass.
GmmHmm gmm_hmm_train(const std::vector<LabeledUtterance>& corpus,
                     const HmmTopology& topo, int mixes,
                     GmmTrainLog* log = nullptr);

/// Per-utterance frame labels emotion_index * states + state_index from
/// the Viterbi path under the utterance's own emotion model. An
/// undecodable utterance yields an empty label sequence and a warning.
std::vector<std::vector<int>> align_states(
    const std::vector<LabeledUtterance>& corpus, const GmmHmm& models);

}  // namespace emorec

#endif  // EMOREC_HMM_HPP_
