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
// Feed-forward state classifier: sigmoid hidden layers, softmax output,
// one output per HMM state across all emotions. Trained by minibatch SGD
// on frame cross-entropy against the Viterbi state alignment. At decode
// time the posteriors are rescaled into observation log-likelihoods by
// dividing out the state priors.

#ifndef EMOREC_MLP_HPP_
#define EMOREC_MLP_HPP_

#include <cstdint>
#include <vector>

#include "emorec/features.hpp"
#include "emorec/rng.hpp"

namespace emorec {

struct MlpModel {
  std::vector<int> layer_sizes;              // input, hidden layers, output
  std::vector<std::vector<double>> weights;  // per layer, row-major out x in
  std::vector<std::vector<double>> biases;   // per layer
};

struct MlpConfig {
  std::vector<int> hidden = {64, 64};  // desk-scale preset
  double lr_start = 0.005;
  double lr_end = 0.0005;
  int epochs_decay = 25;  // lr falls linearly across these epochs
  int epochs_extra = 20;  // then stays at lr_end for these
  int batch_size = 512;
  uint64_t seed = 1;
};

/// Config sized for full corpora: five hidden layers of 512 units.
MlpConfig paper_mlp_config();

/// Glorot-uniform weights, zero biases, drawn from the given stream.
MlpModel mlp_init(const std::vector<int>& layer_sizes, Rng& rng);

/// Throws if layer shapes and parameter widths disagree.
void validate(const MlpModel& model);

/// Softmax posteriors for one input frame of layer_sizes.front() values.
std::vector<double> mlp_posteriors(const MlpModel& model, const double* x);

/// Posterior rows for every frame of the matrix.
std::vector<std::vector<double>> mlp_forward(const MlpModel& model,
                                             const FeatureMatrix& features);

struct MlpGradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

/// Mean cross-entropy of the batch, with parameter gradients of that mean
/// written to `grads` when non-null.
double mlp_loss_and_gradients(const MlpModel& model,
                              const std::vector<const double*>& batch,
                              const std::vector<int>& labels,
                              MlpGradients* grads);

struct MlpTrainLog {
  std::vector<double> epoch_loss;  // mean cross-entropy per epoch
};

/// Minibatch SGD on frame cross-entropy. The learning rate decays
/// linearly from lr_start to lr_end across the first epochs_decay epochs
/// and holds at lr_end for epochs_extra more. Shuffling and weight
/// initialization draw from Rng(cfg.seed), so a fixed seed fixes the
/// trained model. Labels outside [0, n_out) throw InvalidLabel.
MlpModel mlp_train(const FeatureMatrix& features, const std::vector<int>& labels,
                   int n_out, const MlpConfig& cfg, MlpTrainLog* log = nullptr);

struct StatePriors {
  std::vector<double> p;  // unit sum, floored at 1e-8
};

/// Relative state frequencies of the alignment, floored so absent states
/// keep a nonzero prior. Empty sequences (skipped utterances) contribute
/// nothing.
StatePriors priors_from_alignments(const std::vector<std::vector<int>>& labels,
                                   int n_states);

/// Observation scores log p(q | i) - log p(i) per frame and state. The
/// priors are normalized and floored internally, so any positive scaling
/// of them leaves the output unchanged.
std::vector<std::vector<double>> scaled_loglik(
    const std::vector<std::vector<double>>& posteriors,
    const StatePriors& priors);

}  // namespace emorec

#endif  // EMOREC_MLP_HPP_
