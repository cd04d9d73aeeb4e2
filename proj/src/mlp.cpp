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

#include "emorec/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emorec {
namespace {

constexpr double kPriorFloor = 1e-8;
// Keeps log posterior finite when softmax underflows to zero.
constexpr double kPosteriorFloor = 1e-300;

void forward_pass(const MlpModel& model, const double* x,
                  std::vector<std::vector<double>>& activations) {
  const int layers = static_cast<int>(model.layer_sizes.size()) - 1;
  activations.resize(layers + 1);
  activations[0].assign(x, x + model.layer_sizes[0]);
  for (int l = 0; l < layers; ++l) {
    const int n_in = model.layer_sizes[l];
    const int n_out = model.layer_sizes[l + 1];
    const std::vector<double>& prev = activations[l];
    std::vector<double>& out = activations[l + 1];
    out.assign(n_out, 0.0);
    const double* w = model.weights[l].data();
    for (int j = 0; j < n_out; ++j) {
      double z = model.biases[l][j];
      const double* row = w + static_cast<size_t>(j) * n_in;
      for (int i = 0; i < n_in; ++i) z += row[i] * prev[i];
      out[j] = z;
    }
    if (l != layers - 1) {
      for (double& z : out) z = 1.0 / (1.0 + std::exp(-z));
    } else {
      // Output layer: softmax, stabilized by the max logit.
      double m = *std::max_element(out.begin(), out.end());
      double sum = 0.0;
      for (double& z : out) {
        z = std::exp(z - m);
        sum += z;
      }
      for (double& z : out) z /= sum;
    }
  }
}

}  // namespace

MlpConfig paper_mlp_config() {
  MlpConfig cfg;
  cfg.hidden = {512, 512, 512, 512, 512};
  return cfg;
}

MlpModel mlp_init(const std::vector<int>& layer_sizes, Rng& rng) {
  if (layer_sizes.size() < 2) {
    throw InvalidLength("an MLP needs an input and an output layer");
  }
  for (int n : layer_sizes) {
    if (n < 1) throw InvalidLength("layer sizes must be positive");
  }
  MlpModel model;
  model.layer_sizes = layer_sizes;
  const int layers = static_cast<int>(layer_sizes.size()) - 1;
  model.weights.resize(layers);
  model.biases.resize(layers);
  for (int l = 0; l < layers; ++l) {
    const int n_in = layer_sizes[l];
    const int n_out = layer_sizes[l + 1];
    double limit = std::sqrt(6.0 / (n_in + n_out));
    model.weights[l].resize(static_cast<size_t>(n_out) * n_in);
    for (double& w : model.weights[l]) w = rng.uniform(-limit, limit);
    model.biases[l].assign(n_out, 0.0);
  }
  return model;
}

void validate(const MlpModel& model) {
  if (model.layer_sizes.size() < 2) {
    throw InvalidLength("an MLP needs an input and an output layer");
  }
  const size_t layers = model.layer_sizes.size() - 1;
  if (model.weights.size() != layers || model.biases.size() != layers) {
    throw InvalidLength("parameter count does not match the layer count");
  }
  for (size_t l = 0; l < layers; ++l) {
    const size_t n_in = static_cast<size_t>(model.layer_sizes[l]);
    const size_t n_out = static_cast<size_t>(model.layer_sizes[l + 1]);
    if (model.weights[l].size() != n_in * n_out ||
        model.biases[l].size() != n_out) {
      throw InvalidLength("parameter widths do not match the layer sizes");
    }
  }
}

std::vector<double> mlp_posteriors(const MlpModel& model, const double* x) {
  std::vector<std::vector<double>> activations;
  forward_pass(model, x, activations);
  return activations.back();
}

std::vector<std::vector<double>> mlp_forward(const MlpModel& model,
                                             const FeatureMatrix& features) {
  if (features.dims != model.layer_sizes.front()) {
    throw DimensionMismatch("feature width does not match the input layer");
  }
  std::vector<std::vector<double>> posteriors(features.frames);
  for (int64_t t = 0; t < features.frames; ++t) {
    posteriors[t] = mlp_posteriors(
        model, &features.values[static_cast<size_t>(t) * features.dims]);
  }
  return posteriors;
}

double mlp_loss_and_gradients(const MlpModel& model,
                              const std::vector<const double*>& batch,
                              const std::vector<int>& labels,
                              MlpGradients* grads) {
  if (batch.size() != labels.size()) {
    throw InvalidLength("batch and label counts differ");
  }
  if (batch.empty()) throw InvalidLength("empty batch");
  const int layers = static_cast<int>(model.layer_sizes.size()) - 1;
  const int n_out = model.layer_sizes.back();
  if (grads) {
    grads->weights.resize(layers);
    grads->biases.resize(layers);
    for (int l = 0; l < layers; ++l) {
      grads->weights[l].assign(model.weights[l].size(), 0.0);
      grads->biases[l].assign(model.biases[l].size(), 0.0);
    }
  }

  double loss = 0.0;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  std::vector<std::vector<double>> activations;
  std::vector<double> delta, delta_prev;
  for (size_t n = 0; n < batch.size(); ++n) {
    if (labels[n] < 0 || labels[n] >= n_out) {
      throw InvalidLabel("training label outside the output range");
    }
    forward_pass(model, batch[n], activations);
    loss -= std::log(std::max(activations.back()[labels[n]], kPosteriorFloor));
    if (!grads) continue;

    // Softmax with cross-entropy: the output delta is y - onehot(label);
    // hidden deltas backpropagate through the sigmoid derivative.
    delta = activations.back();
    delta[labels[n]] -= 1.0;
    for (int l = layers - 1; l >= 0; --l) {
      const int n_in = model.layer_sizes[l];
      const int n_o = model.layer_sizes[l + 1];
      const std::vector<double>& prev = activations[l];
      for (int j = 0; j < n_o; ++j) {
        double d = delta[j] * inv_batch;
        grads->biases[l][j] += d;
        double* row = &grads->weights[l][static_cast<size_t>(j) * n_in];
        for (int i = 0; i < n_in; ++i) row[i] += d * prev[i];
      }
      if (l == 0) break;
      delta_prev.assign(n_in, 0.0);
      const double* w = model.weights[l].data();
      for (int j = 0; j < n_o; ++j) {
        const double* row = w + static_cast<size_t>(j) * n_in;
        for (int i = 0; i < n_in; ++i) delta_prev[i] += row[i] * delta[j];
      }
      for (int i = 0; i < n_in; ++i) {
        delta_prev[i] *= prev[i] * (1.0 - prev[i]);
      }
      delta.swap(delta_prev);
    }
  }
  return loss * inv_batch;
}

MlpModel mlp_train(const FeatureMatrix& features, const std::vector<int>& labels,
                   int n_out, const MlpConfig& cfg, MlpTrainLog* log) {
  validate(features);
  if (features.frames == 0) throw InvalidLength("no training frames");
  if (static_cast<size_t>(features.frames) != labels.size()) {
    throw InvalidLength("frame and label counts differ");
  }
  if (n_out < 2) throw InvalidLength("the output layer needs at least 2 units");
  for (int y : labels) {
    if (y < 0 || y >= n_out) {
      throw InvalidLabel("training label outside the output range");
    }
  }

  std::vector<int> sizes;
  sizes.push_back(features.dims);
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(n_out);
  Rng rng(cfg.seed);
  MlpModel model = mlp_init(sizes, rng);

  const int total_epochs = cfg.epochs_decay + cfg.epochs_extra;
  const int64_t n = features.frames;
  std::vector<int64_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<const double*> batch;
  std::vector<int> batch_labels;
  MlpGradients grads;
  if (log) log->epoch_loss.clear();

  for (int epoch = 0; epoch < total_epochs; ++epoch) {
    double lr = cfg.lr_end;
    if (epoch < cfg.epochs_decay) {
      int span = std::max(cfg.epochs_decay - 1, 1);
      lr = cfg.lr_start + (cfg.lr_end - cfg.lr_start) * epoch / span;
    }
    rng.shuffle(order);

    double epoch_loss = 0.0;
    for (int64_t start = 0; start < n; start += cfg.batch_size) {
      int64_t stop = std::min(n, start + cfg.batch_size);
      batch.clear();
      batch_labels.clear();
      for (int64_t k = start; k < stop; ++k) {
        batch.push_back(
            &features.values[static_cast<size_t>(order[k]) * features.dims]);
        batch_labels.push_back(labels[order[k]]);
      }
      double batch_loss =
          mlp_loss_and_gradients(model, batch, batch_labels, &grads);
      epoch_loss += batch_loss * static_cast<double>(stop - start);
      for (size_t l = 0; l < model.weights.size(); ++l) {
        for (size_t i = 0; i < model.weights[l].size(); ++i) {
          model.weights[l][i] -= lr * grads.weights[l][i];
        }
        for (size_t i = 0; i < model.biases[l].size(); ++i) {
          model.biases[l][i] -= lr * grads.biases[l][i];
        }
      }
    }
    if (log) log->epoch_loss.push_back(epoch_loss / static_cast<double>(n));
  }
  return model;
}

StatePriors priors_from_alignments(const std::vector<std::vector<int>>& labels,
                                   int n_states) {
  if (n_states < 1) throw InvalidLength("n_states must be positive");
  std::vector<double> counts(n_states, 0.0);
  double total = 0.0;
  for (const std::vector<int>& seq : labels) {
    for (int y : seq) {
      if (y < 0 || y >= n_states) {
        throw InvalidLabel("alignment label outside the state range");
      }
      counts[y] += 1.0;
      total += 1.0;
    }
  }
  if (total <= 0.0) throw InvalidLength("no aligned frames");
  StatePriors priors;
  priors.p.resize(n_states);
  for (int s = 0; s < n_states; ++s) {
    priors.p[s] = std::max(counts[s] / total, kPriorFloor);
  }
  double sum = std::accumulate(priors.p.begin(), priors.p.end(), 0.0);
  for (double& v : priors.p) v /= sum;
  return priors;
}

std::vector<std::vector<double>> scaled_loglik(
    const std::vector<std::vector<double>>& posteriors,
    const StatePriors& priors) {
  const int n = static_cast<int>(priors.p.size());
  if (n == 0) throw InvalidLength("empty priors");
  // Normalize then floor then renormalize: the output is invariant to any
  // positive scaling of the stored priors.
  std::vector<double> p = priors.p;
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(sum > 0.0)) throw InvalidLength("priors must have positive mass");
  for (double& v : p) v = std::max(v / sum, kPriorFloor);
  sum = std::accumulate(p.begin(), p.end(), 0.0);
  std::vector<double> log_prior(n);
  for (int s = 0; s < n; ++s) log_prior[s] = std::log(p[s] / sum);

  std::vector<std::vector<double>> scores(posteriors.size());
  for (size_t t = 0; t < posteriors.size(); ++t) {
    if (static_cast<int>(posteriors[t].size()) != n) {
      throw DimensionMismatch("posterior width does not match the priors");
    }
    scores[t].resize(n);
    for (int s = 0; s < n; ++s) {
      scores[t][s] =
          std::log(std::max(posteriors[t][s], kPosteriorFloor)) - log_prior[s];
    }
  }
  return scores;
}

}  // namespace emorec
