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
// Utterance-level emotion decoding and scoring. Each emotion is scored by
// running Viterbi over its own five-state slice of the frame scores; the
// utterance takes the emotion with the best path log-likelihood. The full
// recognizer bundles the GMM-HMM bootstrap, the LDA projection, the MLP
// observation model and the state priors behind one train/decode pair,
// which leave-one-speaker-out cross-validation drives fold by fold.

#ifndef EMOREC_DECODE_HPP_
#define EMOREC_DECODE_HPP_

#include <string>
#include <vector>

#include "emorec/hmm.hpp"
#include "emorec/lda.hpp"
#include "emorec/mlp.hpp"

namespace emorec {

struct DecodeResult {
  int emotion = 0;               // index into the topology's emotion list
  std::vector<double> logliks;   // best-path loglik per emotion
};

/// Picks the emotion whose state slice [5e, 5e+5) carries the best
/// Viterbi path through `scores` (frames x total states). Loglik ties
/// resolve toward the lexicographically smaller emotion name.
DecodeResult decode_scores(const std::vector<std::vector<double>>& scores,
                           const HmmTopology& topo);

/// Decodes one utterance against the GMM observation models.
DecodeResult decode_gmm(const FeatureMatrix& features, const GmmHmm& models);

struct Metrics {
  double wa = 0.0;   // weighted accuracy, percent
  double uwa = 0.0;  // unweighted accuracy, percent
  std::vector<std::vector<int64_t>> counts;     // confusion, truth x predicted
  std::vector<std::vector<double>> confusion;   // rows normalized to percent
};

/// Mean of per-class recalls, the unweighted accuracy.
double unweighted_average(const std::vector<double>& recalls);

/// Confusion counts and accuracy over parallel prediction and truth
/// lists. A class with no reference items keeps a zero confusion row and
/// is excluded from the UWA with a warning.
Metrics evaluate(const std::vector<int>& predictions,
                 const std::vector<int>& truths, int n_classes);

struct SystemConfig {
  HmmTopology topo = default_topology();
  int gmm_mixes = 2;
  // With use_lda the MLP consumes spliced, LDA-projected frames;
  // without it the raw feature frames feed the MLP directly.
  bool use_lda = true;
  int splice_context = 4;
  int lda_dim = kDefaultLdaDim;
  MlpConfig mlp;
};

struct Recognizer {
  HmmTopology topo;  // transitions as trained
  std::vector<std::vector<GmmState>> gmm;  // bootstrap models, [emotion][state]
  int gmm_dims = 0;
  bool use_lda = true;
  int splice_context = 4;
  LdaTransform lda;  // meaningful only when use_lda
  MlpModel mlp;
  StatePriors priors;
  FeatureLayout feature_layout = FeatureLayout::kCombined69;
  int cmvn_scope = 0;  // 0 utterance, 1 speaker; recorded for the pipeline
};

/// Trains the full stack on labeled feature matrices: GMM-HMM bootstrap,
/// Viterbi state alignment, optional splice plus LDA, MLP cross-entropy
/// training, and priors from the alignment.
Recognizer train_recognizer(const std::vector<LabeledUtterance>& corpus,
                            const SystemConfig& config);

/// Decodes one utterance of the layout the recognizer was trained on.
DecodeResult recognize(const Recognizer& model, const FeatureMatrix& features);

struct FoldMetrics {
  std::string speaker;  // held out
  Metrics metrics;
  std::vector<size_t> test_indices;  // corpus positions decoded in this fold
};

struct XvalResult {
  std::vector<FoldMetrics> folds;
  double wa_mean = 0.0;
  double wa_std = 0.0;
  double uwa_mean = 0.0;
  double uwa_std = 0.0;
};

/// Leave-one-speaker-out cross-validation: one fold per distinct speaker,
/// trained on the others. Throws InsufficientSpeakers below two speakers.
XvalResult cross_validate(const std::vector<LabeledUtterance>& corpus,
                          const SystemConfig& config);

}  // namespace emorec

#endif  // EMOREC_DECODE_HPP_
