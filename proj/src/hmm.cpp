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

#include "emorec/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

namespace emorec {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kVarFloor = 1e-6;
constexpr double kRowTol = 1e-10;
constexpr double kEmTolPerFrame = 1e-4;
constexpr int kMaxEmIters = 20;
// Split offset in standard deviations applied to each perturbed mean.
// Half a deviation is enough for the within-state EM to pull the two
// halves apart before the loglik gain falls under the stopping tolerance.
constexpr double kSplitOffset = 0.5;
// Below this occupancy a component keeps its previous parameters; the
// closed-form update would divide by a vanishing count.
constexpr double kMinComponentOcc = 1.0;

double logsumexp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - m);
  return m + std::log(sum);
}

// Per-state sufficient statistics for one Viterbi-EM pass.
struct StateAccum {
  std::vector<double> occ;                  // per component
  std::vector<std::vector<double>> sum;     // per component, per dim
  std::vector<std::vector<double>> sqsum;   // per component, per dim
};

void reset_accum(StateAccum& acc, int n_comp, int dims) {
  acc.occ.assign(n_comp, 0.0);
  acc.sum.assign(n_comp, std::vector<double>(dims, 0.0));
  acc.sqsum.assign(n_comp, std::vector<double>(dims, 0.0));
}

// Soft component responsibilities within the hard-assigned state; the
// state alignment is Viterbi, the mixture update is one EM step.
void accumulate_frame(const GmmState& state, const double* x, int dims,
                      StateAccum& acc) {
  const int n_comp = static_cast<int>(state.components.size());
  std::vector<double> logp(n_comp);
  for (int k = 0; k < n_comp; ++k) {
    const Gaussian& g = state.components[k];
    double ll = 0.0;
    for (int d = 0; d < dims; ++d) {
      double diff = x[d] - g.mean[d];
      ll += std::log(2.0 * M_PI * g.var[d]) + diff * diff / g.var[d];
    }
    double w = std::max(state.weights[k], 1e-300);
    logp[k] = std::log(w) - 0.5 * ll;
  }
  double norm = logsumexp(logp);
  for (int k = 0; k < n_comp; ++k) {
    double r = std::exp(logp[k] - norm);
    acc.occ[k] += r;
    for (int d = 0; d < dims; ++d) {
      acc.sum[k][d] += r * x[d];
      acc.sqsum[k][d] += r * x[d] * x[d];
    }
  }
}

void apply_accum(const StateAccum& acc, int dims, GmmState& state) {
  const int n_comp = static_cast<int>(state.components.size());
  double total = std::accumulate(acc.occ.begin(), acc.occ.end(), 0.0);
  if (total <= 0.0) return;  // state unseen this pass, keep parameters
  for (int k = 0; k < n_comp; ++k) {
    state.weights[k] = acc.occ[k] / total;
    if (acc.occ[k] < kMinComponentOcc) continue;
    Gaussian& g = state.components[k];
    for (int d = 0; d < dims; ++d) {
      double mean = acc.sum[k][d] / acc.occ[k];
      double var = acc.sqsum[k][d] / acc.occ[k] - mean * mean;
      g.mean[d] = mean;
      g.var[d] = std::max(var, kVarFloor);
    }
  }
  double wsum =
      std::accumulate(state.weights.begin(), state.weights.end(), 0.0);
  for (double& w : state.weights) w /= wsum;
}

// Splits the heaviest components until the state reaches target_comp,
// perturbing each mean by +-0.2 standard deviations.
void split_state(GmmState& state, int target_comp) {
  while (static_cast<int>(state.components.size()) < target_comp) {
    int heaviest = 0;
    for (int k = 1; k < static_cast<int>(state.weights.size()); ++k) {
      if (state.weights[k] > state.weights[heaviest]) heaviest = k;
    }
    Gaussian lo = state.components[heaviest];
    Gaussian hi = lo;
    for (size_t d = 0; d < lo.mean.size(); ++d) {
      double offset = kSplitOffset * std::sqrt(lo.var[d]);
      lo.mean[d] -= offset;
      hi.mean[d] += offset;
    }
    double w = state.weights[heaviest] / 2.0;
    state.components[heaviest] = lo;
    state.weights[heaviest] = w;
    state.components.push_back(hi);
    state.weights.push_back(w);
  }
}

}  // namespace

HmmTopology default_topology(const std::vector<std::string>& emotions,
                             int states_per_emotion) {
  HmmTopology topo;
  topo.emotions = emotions;
  topo.states_per_emotion = states_per_emotion;
  const int s = states_per_emotion;
  std::vector<double> rows(static_cast<size_t>(s) * s, 0.0);
  for (int i = 0; i < s; ++i) {
    if (i + 1 < s) {
      rows[static_cast<size_t>(i) * s + i] = 0.5;
      rows[static_cast<size_t>(i) * s + i + 1] = 0.5;
    } else {
      rows[static_cast<size_t>(i) * s + i] = 1.0;
    }
  }
  topo.transitions.assign(emotions.size(), rows);
  return topo;
}

void validate(const HmmTopology& topo) {
  if (topo.emotions.empty()) throw Error("topology has no emotions");
  if (topo.states_per_emotion < 1) {
    throw Error("states_per_emotion must be positive");
  }
  if (topo.transitions.size() != topo.emotions.size()) {
    throw Error("topology needs one transition matrix per emotion");
  }
  const int s = topo.states_per_emotion;
  for (size_t e = 0; e < topo.transitions.size(); ++e) {
    const std::vector<double>& t = topo.transitions[e];
    if (static_cast<int>(t.size()) != s * s) {
      throw Error("transition matrix for " + topo.emotions[e] +
                  " is not states x states");
    }
    for (int i = 0; i < s; ++i) {
      double row_sum = 0.0;
      for (int j = 0; j < s; ++j) {
        double p = t[static_cast<size_t>(i) * s + j];
        if (!(p >= 0.0)) {
          throw Error("transition probabilities must be nonnegative");
        }
        if (j != i && j != i + 1 && p != 0.0) {
          throw Error("left-to-right topology allows only self and forward "
                      "transitions");
        }
        row_sum += p;
      }
      if (std::abs(row_sum - 1.0) > kRowTol) {
        std::ostringstream msg;
        msg << "transition row " << i << " of " << topo.emotions[e]
            << " sums to " << row_sum;
        throw Error(msg.str());
      }
    }
  }
}

double gmm_loglik(const GmmState& state, const double* x, int dims) {
  std::vector<double> terms(state.components.size());
  for (size_t k = 0; k < state.components.size(); ++k) {
    const Gaussian& g = state.components[k];
    double ll = 0.0;
    for (int d = 0; d < dims; ++d) {
      double diff = x[d] - g.mean[d];
      ll += std::log(2.0 * M_PI * g.var[d]) + diff * diff / g.var[d];
    }
    double w = std::max(state.weights[k], 1e-300);
    terms[k] = std::log(w) - 0.5 * ll;
  }
  return logsumexp(terms);
}

ViterbiResult viterbi(const std::vector<std::vector<double>>& obs_loglik,
                      const std::vector<std::vector<double>>& transitions) {
  const int frames = static_cast<int>(obs_loglik.size());
  if (frames == 0) throw EmptyUtterance("viterbi needs at least one frame");
  const int states = static_cast<int>(transitions.size());
  if (states == 0) throw InvalidLength("empty transition matrix");
  for (const std::vector<double>& row : transitions) {
    if (static_cast<int>(row.size()) != states) {
      throw InvalidLength("transition matrix is not square");
    }
  }
  for (int t = 0; t < frames; ++t) {
    if (static_cast<int>(obs_loglik[t].size()) != states) {
      throw InvalidLength("observation row width does not match state count");
    }
    bool any = false;
    for (double v : obs_loglik[t]) any = any || v > kNegInf;
    if (!any) {
      std::ostringstream msg;
      msg << "frame " << t << " is -inf in every state";
      throw UndecodableFrame(msg.str());
    }
  }

  std::vector<std::vector<double>> log_trans(
      states, std::vector<double>(states, kNegInf));
  for (int i = 0; i < states; ++i) {
    for (int j = 0; j < states; ++j) {
      if (transitions[i][j] > 0.0) log_trans[i][j] = std::log(transitions[i][j]);
    }
  }

  // Entry is pinned to state 0; ties resolve toward the lower index by
  // scanning predecessors in ascending order with a strict comparison.
  std::vector<std::vector<double>> delta(frames,
                                         std::vector<double>(states, kNegInf));
  std::vector<std::vector<int>> back(frames, std::vector<int>(states, 0));
  delta[0][0] = obs_loglik[0][0];
  for (int t = 1; t < frames; ++t) {
    for (int j = 0; j < states; ++j) {
      double best = kNegInf;
      int best_i = 0;
      for (int i = 0; i < states; ++i) {
        double score = delta[t - 1][i] + log_trans[i][j];
        if (score > best) {
          best = score;
          best_i = i;
        }
      }
      delta[t][j] = best + obs_loglik[t][j];
      back[t][j] = best_i;
    }
  }

  double best = kNegInf;
  int best_state = 0;
  for (int s = 0; s < states; ++s) {
    if (delta[frames - 1][s] > best) {
      best = delta[frames - 1][s];
      best_state = s;
    }
  }
  if (best == kNegInf) throw UndecodableFrame("no admissible state path");

  ViterbiResult result;
  result.loglik = best;
  result.path.assign(frames, 0);
  result.path[frames - 1] = best_state;
  for (int t = frames - 1; t > 0; --t) {
    result.path[t - 1] = back[t][result.path[t]];
  }
  return result;
}

GmmHmm gmm_hmm_train(const std::vector<LabeledUtterance>& corpus,
                     const HmmTopology& topo, int mixes, GmmTrainLog* log) {
  validate(topo);
  if (mixes < 1) throw Error("mixes must be positive");
  const int n_emotions = static_cast<int>(topo.emotions.size());
  const int S = topo.states_per_emotion;

  // Usable utterances per emotion; shorter than one frame per state the
  // uniform segmentation would leave states empty.
  std::vector<std::vector<const FeatureMatrix*>> per_emotion(n_emotions);
  int dims = 0;
  for (const LabeledUtterance& utt : corpus) {
    if (utt.emotion < 0 || utt.emotion >= n_emotions) {
      throw InvalidLabel("utterance emotion index out of range");
    }
    if (utt.features.frames < S) {
      std::cerr << "gmm: skipping " << utt.features.frames
                << " frame utterance, shorter than " << S << " states\n";
      continue;
    }
    if (dims == 0) dims = utt.features.dims;
    if (utt.features.dims != dims) {
      throw DimensionMismatch("corpus mixes feature dimensionalities");
    }
    per_emotion[utt.emotion].push_back(&utt.features);
  }
  for (int e = 0; e < n_emotions; ++e) {
    if (per_emotion[e].empty()) {
      throw MissingClass("no usable utterances for " + topo.emotions[e]);
    }
  }

  GmmHmm models;
  models.topo = topo;
  models.dims = dims;
  models.states.assign(n_emotions, std::vector<GmmState>());
  if (log) log->iteration_loglik.assign(n_emotions, {});

  for (int e = 0; e < n_emotions; ++e) {
    // Uniform segmentation: frame t of an utterance with T frames seeds
    // state floor(t * S / T), a single Gaussian per state.
    std::vector<StateAccum> seed(S);
    for (StateAccum& acc : seed) reset_accum(acc, 1, dims);
    for (const FeatureMatrix* m : per_emotion[e]) {
      for (int64_t t = 0; t < m->frames; ++t) {
        int s = static_cast<int>(t * S / m->frames);
        const double* x = &m->values[static_cast<size_t>(t) * dims];
        seed[s].occ[0] += 1.0;
        for (int d = 0; d < dims; ++d) {
          seed[s].sum[0][d] += x[d];
          seed[s].sqsum[0][d] += x[d] * x[d];
        }
      }
    }
    std::vector<GmmState>& states = models.states[e];
    states.assign(S, GmmState());
    for (int s = 0; s < S; ++s) {
      GmmState& st = states[s];
      st.weights = {1.0};
      st.components.assign(1, Gaussian());
      st.components[0].mean.assign(dims, 0.0);
      st.components[0].var.assign(dims, 1.0);
      apply_accum(seed[s], dims, st);
    }

    std::vector<double>& trans = models.topo.transitions[e];
    int64_t total_frames = 0;
    for (const FeatureMatrix* m : per_emotion[e]) total_frames += m->frames;

    // Viterbi-EM rounds, doubling the mixture count between rounds until
    // every state carries `mixes` components.
    while (true) {
      double prev_ll = kNegInf;
      for (int iter = 0; iter < kMaxEmIters; ++iter) {
        std::vector<StateAccum> accum(S);
        int n_comp = static_cast<int>(states[0].components.size());
        for (StateAccum& acc : accum) reset_accum(acc, n_comp, dims);
        std::vector<std::vector<double>> trans_count(
            S, std::vector<double>(S, 0.0));
        double total_ll = 0.0;

        for (const FeatureMatrix* m : per_emotion[e]) {
          std::vector<std::vector<double>> obs(
              m->frames, std::vector<double>(S, 0.0));
          for (int64_t t = 0; t < m->frames; ++t) {
            const double* x = &m->values[static_cast<size_t>(t) * dims];
            for (int s = 0; s < S; ++s) obs[t][s] = gmm_loglik(states[s], x, dims);
          }
          std::vector<std::vector<double>> tmat(S, std::vector<double>(S));
          for (int i = 0; i < S; ++i) {
            for (int j = 0; j < S; ++j) {
              tmat[i][j] = trans[static_cast<size_t>(i) * S + j];
            }
          }
          ViterbiResult vit = viterbi(obs, tmat);
          total_ll += vit.loglik;
          for (int64_t t = 0; t < m->frames; ++t) {
            const double* x = &m->values[static_cast<size_t>(t) * dims];
            accumulate_frame(states[vit.path[t]], x, dims, accum[vit.path[t]]);
            if (t + 1 < m->frames) {
              trans_count[vit.path[t]][vit.path[t + 1]] += 1.0;
            }
          }
        }

        if (log) log->iteration_loglik[e].push_back(total_ll);
        if (iter > 0 &&
            (total_ll - prev_ll) / total_frames < kEmTolPerFrame) {
          break;
        }
        prev_ll = total_ll;

        for (int s = 0; s < S; ++s) apply_accum(accum[s], dims, states[s]);
        for (int i = 0; i < S; ++i) {
          double row_total = 0.0;
          for (int j = 0; j < S; ++j) row_total += trans_count[i][j];
          if (row_total <= 0.0) continue;  // state unseen, keep its row
          for (int j = 0; j < S; ++j) {
            trans[static_cast<size_t>(i) * S + j] = trans_count[i][j] / row_total;
          }
        }
      }

      int n_comp = static_cast<int>(states[0].components.size());
      if (n_comp >= mixes) break;
      int target = std::min(2 * n_comp, mixes);
      for (GmmState& st : states) split_state(st, target);
    }
  }
  return models;
}

std::vector<std::vector<int>> align_states(
    const std::vector<LabeledUtterance>& corpus, const GmmHmm& models) {
  validate(models.topo);
  const int S = models.topo.states_per_emotion;
  std::vector<std::vector<int>> labels;
  labels.reserve(corpus.size());
  for (const LabeledUtterance& utt : corpus) {
    if (utt.emotion < 0 ||
        utt.emotion >= static_cast<int>(models.topo.emotions.size())) {
      throw InvalidLabel("utterance emotion index out of range");
    }
    if (utt.features.dims != models.dims) {
      throw DimensionMismatch("utterance width does not match the model");
    }
    if (utt.features.frames == 0) {
      std::cerr << "align: skipping empty utterance\n";
      labels.emplace_back();
      continue;
    }
    const std::vector<GmmState>& states = models.states[utt.emotion];
    std::vector<std::vector<double>> obs(utt.features.frames,
                                         std::vector<double>(S, 0.0));
    for (int64_t t = 0; t < utt.features.frames; ++t) {
      const double* x =
          &utt.features.values[static_cast<size_t>(t) * models.dims];
      for (int s = 0; s < S; ++s) obs[t][s] = gmm_loglik(states[s], x, models.dims);
    }
    const std::vector<double>& trans = models.topo.transitions[utt.emotion];
    std::vector<std::vector<double>> tmat(S, std::vector<double>(S));
    for (int i = 0; i < S; ++i) {
      for (int j = 0; j < S; ++j) tmat[i][j] = trans[static_cast<size_t>(i) * S + j];
    }
    try {
      ViterbiResult vit = viterbi(obs, tmat);
      std::vector<int> utt_labels(vit.path.size());
      for (size_t t = 0; t < vit.path.size(); ++t) {
        utt_labels[t] = utt.emotion * S + vit.path[t];
      }
      labels.push_back(std::move(utt_labels));
    } catch (const UndecodableFrame& err) {
      std::cerr << "align: skipping undecodable utterance: " << err.what()
                << "\n";
      labels.emplace_back();
    }
  }
  return labels;
}

}  // namespace emorec
