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

#include "emorec/decode.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <set>

namespace emorec {
namespace {

std::vector<std::vector<double>> square_transitions(
    const std::vector<double>& flat, int states) {
  std::vector<std::vector<double>> square(states, std::vector<double>(states));
  for (int i = 0; i < states; ++i) {
    for (int j = 0; j < states; ++j) {
      square[i][j] = flat[static_cast<size_t>(i) * states + j];
    }
  }
  return square;
}

DecodeResult pick_best(const std::vector<double>& logliks,
                       const HmmTopology& topo) {
  DecodeResult result;
  result.logliks = logliks;
  result.emotion = 0;
  for (int e = 1; e < static_cast<int>(logliks.size()); ++e) {
    if (logliks[e] > logliks[result.emotion] ||
        (logliks[e] == logliks[result.emotion] &&
         topo.emotions[e] < topo.emotions[result.emotion])) {
      result.emotion = e;
    }
  }
  return result;
}

// Spliced and LDA-projected view of one utterance, or the raw frames when
// the recognizer runs without LDA.
FeatureMatrix prepare_features(const FeatureMatrix& features, bool use_lda,
                               int splice_context, const LdaTransform& lda) {
  if (!use_lda) return features;
  return lda_apply(lda, splice(features, splice_context));
}

}  // namespace

DecodeResult decode_scores(const std::vector<std::vector<double>>& scores,
                           const HmmTopology& topo) {
  validate(topo);
  if (scores.empty()) throw EmptyUtterance("decode needs at least one frame");
  const int S = topo.states_per_emotion;
  const int total = topo.total_states();
  const int n_emotions = static_cast<int>(topo.emotions.size());
  for (const std::vector<double>& row : scores) {
    if (static_cast<int>(row.size()) != total) {
      throw DimensionMismatch("score width does not match the state count");
    }
  }
  std::vector<double> logliks(n_emotions);
  std::vector<std::vector<double>> slice(scores.size(),
                                         std::vector<double>(S, 0.0));
  for (int e = 0; e < n_emotions; ++e) {
    for (size_t t = 0; t < scores.size(); ++t) {
      for (int s = 0; s < S; ++s) slice[t][s] = scores[t][e * S + s];
    }
    logliks[e] = viterbi(slice, square_transitions(topo.transitions[e], S)).loglik;
  }
  return pick_best(logliks, topo);
}

DecodeResult decode_gmm(const FeatureMatrix& features, const GmmHmm& models) {
  validate(models.topo);
  if (features.frames == 0) {
    throw EmptyUtterance("decode needs at least one frame");
  }
  if (features.dims != models.dims) {
    throw DimensionMismatch("utterance width does not match the model");
  }
  const int S = models.topo.states_per_emotion;
  const int n_emotions = static_cast<int>(models.topo.emotions.size());
  std::vector<double> logliks(n_emotions);
  std::vector<std::vector<double>> obs(features.frames,
                                       std::vector<double>(S, 0.0));
  for (int e = 0; e < n_emotions; ++e) {
    for (int64_t t = 0; t < features.frames; ++t) {
      const double* x = &features.values[static_cast<size_t>(t) * features.dims];
      for (int s = 0; s < S; ++s) {
        obs[t][s] = gmm_loglik(models.states[e][s], x, features.dims);
      }
    }
    logliks[e] =
        viterbi(obs, square_transitions(models.topo.transitions[e], S)).loglik;
  }
  return pick_best(logliks, models.topo);
}

double unweighted_average(const std::vector<double>& recalls) {
  if (recalls.empty()) throw InvalidLength("no recalls to average");
  double sum = 0.0;
  for (double r : recalls) sum += r;
  return sum / static_cast<double>(recalls.size());
}

Metrics evaluate(const std::vector<int>& predictions,
                 const std::vector<int>& truths, int n_classes) {
  if (predictions.size() != truths.size()) {
    throw InvalidLength("prediction and truth counts differ");
  }
  if (predictions.empty()) throw InvalidLength("nothing to evaluate");
  if (n_classes < 1) throw InvalidLength("n_classes must be positive");

  Metrics m;
  m.counts.assign(n_classes, std::vector<int64_t>(n_classes, 0));
  int64_t correct = 0;
  for (size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] < 0 || truths[i] >= n_classes || predictions[i] < 0 ||
        predictions[i] >= n_classes) {
      throw InvalidLabel("class index outside [0, n_classes)");
    }
    m.counts[truths[i]][predictions[i]] += 1;
    if (predictions[i] == truths[i]) correct += 1;
  }
  m.wa = 100.0 * static_cast<double>(correct) /
         static_cast<double>(truths.size());

  m.confusion.assign(n_classes, std::vector<double>(n_classes, 0.0));
  std::vector<double> recalls;
  for (int c = 0; c < n_classes; ++c) {
    int64_t row_total = 0;
    for (int64_t v : m.counts[c]) row_total += v;
    if (row_total == 0) {
      std::cerr << "evaluate: class " << c
                << " has no reference items, excluded from UWA\n";
      continue;
    }
    for (int k = 0; k < n_classes; ++k) {
      m.confusion[c][k] =
          100.0 * static_cast<double>(m.counts[c][k]) / row_total;
    }
    recalls.push_back(m.confusion[c][c]);
  }
  m.uwa = unweighted_average(recalls);
  return m;
}

Recognizer train_recognizer(const std::vector<LabeledUtterance>& corpus,
                            const SystemConfig& config) {
  if (corpus.empty()) throw MissingClass("empty training corpus");

  GmmHmm gmm = gmm_hmm_train(corpus, config.topo, config.gmm_mixes);
  std::vector<std::vector<int>> alignment = align_states(corpus, gmm);

  Recognizer model;
  model.topo = gmm.topo;
  model.gmm = gmm.states;
  model.gmm_dims = gmm.dims;
  model.use_lda = config.use_lda;
  model.splice_context = config.splice_context;
  model.feature_layout = corpus.front().features.layout;
  for (const LabeledUtterance& utt : corpus) {
    if (utt.features.layout != model.feature_layout) {
      throw DimensionMismatch("corpus mixes feature layouts");
    }
  }
  const int total_states = model.topo.total_states();

  // Aligned utterances feed the discriminative stages; skipped ones
  // contributed nothing to the alignment and are left out here too.
  std::vector<FeatureMatrix> spliced;
  std::vector<std::vector<int>> labels;
  for (size_t u = 0; u < corpus.size(); ++u) {
    if (alignment[u].empty()) continue;
    if (config.use_lda) {
      spliced.push_back(splice(corpus[u].features, config.splice_context));
    } else {
      spliced.push_back(corpus[u].features);
    }
    labels.push_back(alignment[u]);
  }
  if (spliced.empty()) throw MissingClass("no aligned utterances");

  if (config.use_lda) {
    model.lda = lda_fit(spliced, labels, total_states, config.lda_dim);
  }

  // One flat matrix for SGD; shuffling happens inside the trainer.
  FeatureMatrix train;
  std::vector<int> flat_labels;
  for (size_t u = 0; u < spliced.size(); ++u) {
    FeatureMatrix prepared =
        config.use_lda ? lda_apply(model.lda, spliced[u]) : spliced[u];
    if (train.frames == 0) {
      train.dims = prepared.dims;
      train.layout = prepared.layout;
    }
    train.frames += prepared.frames;
    train.values.insert(train.values.end(), prepared.values.begin(),
                        prepared.values.end());
    flat_labels.insert(flat_labels.end(), labels[u].begin(), labels[u].end());
  }
  model.mlp = mlp_train(train, flat_labels, total_states, config.mlp);
  model.priors = priors_from_alignments(labels, total_states);
  return model;
}

DecodeResult recognize(const Recognizer& model, const FeatureMatrix& features) {
  if (features.frames == 0) {
    throw EmptyUtterance("decode needs at least one frame");
  }
  if (features.layout != model.feature_layout) {
    throw DimensionMismatch("utterance layout does not match the model");
  }
  FeatureMatrix prepared = prepare_features(features, model.use_lda,
                                            model.splice_context, model.lda);
  std::vector<std::vector<double>> posteriors =
      mlp_forward(model.mlp, prepared);
  return decode_scores(scaled_loglik(posteriors, model.priors), model.topo);
}

XvalResult cross_validate(const std::vector<LabeledUtterance>& corpus,
                          const SystemConfig& config) {
  std::set<std::string> speaker_set;
  for (const LabeledUtterance& utt : corpus) speaker_set.insert(utt.speaker);
  if (speaker_set.size() < 2) {
    throw InsufficientSpeakers(
        "leave-one-speaker-out needs at least 2 speakers");
  }

  XvalResult result;
  for (const std::string& speaker : speaker_set) {
    std::vector<LabeledUtterance> train_split;
    FoldMetrics fold;
    fold.speaker = speaker;
    for (size_t u = 0; u < corpus.size(); ++u) {
      if (corpus[u].speaker == speaker) {
        fold.test_indices.push_back(u);
      } else {
        train_split.push_back(corpus[u]);
      }
    }
    Recognizer model = train_recognizer(train_split, config);
    std::vector<int> predictions, truths;
    for (size_t u : fold.test_indices) {
      predictions.push_back(recognize(model, corpus[u].features).emotion);
      truths.push_back(corpus[u].emotion);
    }
    fold.metrics = evaluate(predictions, truths,
                            static_cast<int>(config.topo.emotions.size()));
    result.folds.push_back(std::move(fold));
  }

  double wa_sum = 0.0, uwa_sum = 0.0;
  for (const FoldMetrics& fold : result.folds) {
    wa_sum += fold.metrics.wa;
    uwa_sum += fold.metrics.uwa;
  }
  const double n = static_cast<double>(result.folds.size());
  result.wa_mean = wa_sum / n;
  result.uwa_mean = uwa_sum / n;
  double wa_var = 0.0, uwa_var = 0.0;
  for (const FoldMetrics& fold : result.folds) {
    wa_var += (fold.metrics.wa - result.wa_mean) * (fold.metrics.wa - result.wa_mean);
    uwa_var += (fold.metrics.uwa - result.uwa_mean) *
               (fold.metrics.uwa - result.uwa_mean);
  }
  result.wa_std = std::sqrt(wa_var / n);
  result.uwa_std = std::sqrt(uwa_var / n);
  return result;
}

}  // namespace emorec
