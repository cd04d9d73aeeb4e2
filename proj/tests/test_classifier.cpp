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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "emorec/common.hpp"
#include "emorec/decode.hpp"
#include "emorec/hmm.hpp"
#include "emorec/mlp.hpp"
#include "emorec/model_io.hpp"
#include "emorec/rng.hpp"

using namespace emorec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Score of one fixed state sequence under entry pinned to state 0.
double score_path(const std::vector<int>& path,
                  const std::vector<std::vector<double>>& obs,
                  const std::vector<std::vector<double>>& trans) {
  if (path[0] != 0) return -kInf;
  double score = obs[0][path[0]];
  for (size_t t = 1; t < path.size(); ++t) {
    double p = trans[path[t - 1]][path[t]];
    score += (p > 0.0 ? std::log(p) : -kInf) + obs[t][path[t]];
  }
  return score;
}

// Exhaustive search over every state sequence; the reference for viterbi.
double brute_force_best(const std::vector<std::vector<double>>& obs,
                        const std::vector<std::vector<double>>& trans) {
  const int frames = static_cast<int>(obs.size());
  const int states = static_cast<int>(trans.size());
  std::vector<int> path(frames, 0);
  double best = -kInf;
  while (true) {
    best = std::max(best, score_path(path, obs, trans));
    int pos = frames - 1;
    while (pos >= 0 && path[pos] == states - 1) path[pos--] = 0;
    if (pos < 0) break;
    path[pos] += 1;
  }
  return best;
}

// Random left-to-right transition matrix with positive self and forward
// probabilities.
std::vector<std::vector<double>> random_ltr(Rng* rng, int states) {
  std::vector<std::vector<double>> trans(states,
                                         std::vector<double>(states, 0.0));
  for (int i = 0; i < states; ++i) {
    if (i + 1 < states) {
      double self = rng->uniform(0.2, 0.8);
      trans[i][i] = self;
      trans[i][i + 1] = 1.0 - self;
    } else {
      trans[i][i] = 1.0;
    }
  }
  return trans;
}

FeatureMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  FeatureMatrix m;
  m.frames = static_cast<int64_t>(rows.size());
  m.dims = static_cast<int>(rows.front().size());
  m.layout = FeatureLayout::kLda;
  for (const std::vector<double>& row : rows) {
    m.values.insert(m.values.end(), row.begin(), row.end());
  }
  return m;
}

// Synthetic corpus with one well-separated cluster per emotion and state:
// each utterance walks five 12-frame blocks whose means are scaled
// one-hot vectors, plus a small per-speaker shift.
std::vector<LabeledUtterance> block_corpus(int n_speakers,
                                           int utts_per_emotion, int dims,
                                           uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledUtterance> corpus;
  for (int spk = 0; spk < n_speakers; ++spk) {
    for (int e = 0; e < 4; ++e) {
      for (int u = 0; u < utts_per_emotion; ++u) {
        std::vector<std::vector<double>> rows;
        for (int s = 0; s < 5; ++s) {
          for (int f = 0; f < 12; ++f) {
            std::vector<double> row(dims, 0.0);
            for (int d = 0; d < dims; ++d) row[d] = 0.3 * rng.gaussian();
            row[(e * 5 + s) % dims] += 4.0;
            row[0] += 0.05 * spk;
            rows.push_back(row);
          }
        }
        LabeledUtterance utt;
        utt.features = matrix_from_rows(rows);
        utt.emotion = e;
        utt.speaker = "spk" + std::to_string(spk);
        corpus.push_back(std::move(utt));
      }
    }
  }
  return corpus;
}

SystemConfig quick_system_config() {
  SystemConfig config;
  config.gmm_mixes = 2;
  config.use_lda = true;
  config.splice_context = 4;
  config.lda_dim = 8;
  config.mlp.hidden = {16};
  config.mlp.lr_start = 0.1;
  config.mlp.lr_end = 0.01;
  config.mlp.epochs_decay = 6;
  config.mlp.epochs_extra = 4;
  config.mlp.batch_size = 64;
  config.mlp.seed = 3;
  return config;
}

}  // namespace

TEST_CASE("default topology is row stochastic and left to right") {
  HmmTopology topo = default_topology();
  validate(topo);
  REQUIRE(topo.emotions.size() == 4);
  REQUIRE(topo.states_per_emotion == 5);
  REQUIRE(topo.total_states() == 20);
  for (const std::vector<double>& t : topo.transitions) {
    for (int i = 0; i < 5; ++i) {
      double row = 0.0;
      for (int j = 0; j < 5; ++j) {
        double p = t[static_cast<size_t>(i) * 5 + j];
        if (j != i && j != i + 1) CHECK(p == 0.0);
        row += p;
      }
      CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(t[4 * 5 + 4] == 1.0);
  }

  HmmTopology bad = topo;
  bad.transitions[1][0] = 0.7;  // row no longer sums to one
  CHECK_THROWS_AS(validate(bad), Error);
  bad = topo;
  bad.transitions[2][1 * 5 + 0] = 0.0;  // backward mass
  bad.transitions[2][1 * 5 + 1] = 0.5;
  bad.transitions[2][1 * 5 + 3] = 0.5;  // skip mass
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("viterbi entry is pinned to the first state") {
  std::vector<std::vector<double>> obs = {{-5.0, -1.0, -1.0, -1.0, -0.1}};
  HmmTopology topo = default_topology();
  std::vector<std::vector<double>> trans(5, std::vector<double>(5, 0.0));
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      trans[i][j] = topo.transitions[0][static_cast<size_t>(i) * 5 + j];
    }
  }
  ViterbiResult r = viterbi(obs, trans);
  REQUIRE(r.path.size() == 1);
  CHECK(r.path[0] == 0);
  CHECK(r.loglik == obs[0][0]);
}

TEST_CASE("viterbi ties stay on the lower state") {
  std::vector<std::vector<double>> obs(4, std::vector<double>(5, -1.0));
  std::vector<std::vector<double>> trans(5, std::vector<double>(5, 0.2));
  ViterbiResult r = viterbi(obs, trans);
  for (int s : r.path) CHECK(s == 0);
}

TEST_CASE("viterbi matches exhaustive search") {
  Rng rng(2024);
  int checked = 0;
  for (int instance = 0; instance < 300; ++instance) {
    const int frames = rng.uniform_int(1, 6);
    const int states = 5;
    std::vector<std::vector<double>> trans = random_ltr(&rng, states);
    std::vector<std::vector<double>> obs(frames,
                                         std::vector<double>(states, 0.0));
    for (int t = 0; t < frames; ++t) {
      for (int s = 0; s < states; ++s) {
        obs[t][s] = rng.uniform() < 0.06 ? -kInf : rng.uniform(-5.0, 0.0);
      }
      bool any = false;
      for (double v : obs[t]) any = any || v > -kInf;
      if (!any) obs[t][rng.uniform_int(0, states - 1)] = rng.uniform(-5.0, 0.0);
    }

    const double best = brute_force_best(obs, trans);
    if (best == -kInf) {
      CHECK_THROWS_AS(viterbi(obs, trans), UndecodableFrame);
      continue;
    }
    ViterbiResult r = viterbi(obs, trans);
    CHECK(r.loglik == doctest::Approx(best).epsilon(1e-9));
    CHECK(score_path(r.path, obs, trans) ==
          doctest::Approx(r.loglik).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("viterbi rejects undecodable input") {
  std::vector<std::vector<double>> trans = {{0.5, 0.5}, {0.0, 1.0}};
  CHECK_THROWS_AS(viterbi({}, trans), EmptyUtterance);
  std::vector<std::vector<double>> obs = {{-1.0, -1.0}, {-kInf, -kInf}};
  CHECK_THROWS_AS(viterbi(obs, trans), UndecodableFrame);
}

TEST_CASE("single gaussian training recovers the data moments") {
  Rng rng(5);
  const int frames = 200;
  const int dims = 3;
  const std::vector<double> mean = {1.0, -2.0, 3.0};
  const std::vector<double> sigma = {1.0, 2.0, 0.5};
  std::vector<std::vector<double>> rows;
  for (int t = 0; t < frames; ++t) {
    std::vector<double> row(dims);
    for (int d = 0; d < dims; ++d) row[d] = mean[d] + sigma[d] * rng.gaussian();
    rows.push_back(row);
  }

  LabeledUtterance utt;
  utt.features = matrix_from_rows(rows);
  utt.emotion = 0;
  utt.speaker = "a";
  GmmHmm models = gmm_hmm_train({utt}, default_topology({"only"}, 1), 1);

  for (int d = 0; d < dims; ++d) {
    double m1 = 0.0, m2 = 0.0;
    for (const std::vector<double>& row : rows) {
      m1 += row[d];
      m2 += row[d] * row[d];
    }
    m1 /= frames;
    m2 = m2 / frames - m1 * m1;
    const Gaussian& g = models.states[0][0].components[0];
    CHECK(g.mean[d] == doctest::Approx(m1).epsilon(1e-9));
    CHECK(g.var[d] == doctest::Approx(std::max(m2, 1e-6)).epsilon(1e-9));
  }
}

TEST_CASE("mixture splitting separates two clusters") {
  Rng rng(6);
  std::vector<std::vector<double>> rows;
  for (int t = 0; t < 300; ++t) rows.push_back({-2.0 + 0.1 * rng.gaussian()});
  for (int t = 0; t < 300; ++t) rows.push_back({2.0 + 0.1 * rng.gaussian()});

  LabeledUtterance utt;
  utt.features = matrix_from_rows(rows);
  utt.emotion = 0;
  utt.speaker = "a";
  GmmHmm models = gmm_hmm_train({utt}, default_topology({"only"}, 1), 2);

  const GmmState& st = models.states[0][0];
  REQUIRE(st.components.size() == 2);
  double lo = std::min(st.components[0].mean[0], st.components[1].mean[0]);
  double hi = std::max(st.components[0].mean[0], st.components[1].mean[0]);
  CHECK(std::abs(lo - (-2.0)) < 0.1);
  CHECK(std::abs(hi - 2.0) < 0.1);
  CHECK(st.weights[0] == doctest::Approx(0.5).epsilon(0.05));
  CHECK(st.weights[1] == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("viterbi em does not degrade the path likelihood") {
  std::vector<LabeledUtterance> corpus = block_corpus(1, 2, 20, 77);
  GmmTrainLog log;
  GmmHmm models = gmm_hmm_train(corpus, default_topology(), 2, &log);
  REQUIRE(log.iteration_loglik.size() == 4);
  for (const std::vector<double>& seq : log.iteration_loglik) {
    REQUIRE(seq.size() >= 2);
    CHECK(seq.back() >= seq.front() - 1e-6);
  }
  // Reestimated transitions still satisfy every topology invariant.
  validate(models.topo);
}

TEST_CASE("alignment labels are non-decreasing and cover every state") {
  std::vector<LabeledUtterance> corpus = block_corpus(1, 3, 20, 78);
  GmmHmm models = gmm_hmm_train(corpus, default_topology(), 1);
  std::vector<std::vector<int>> labels = align_states(corpus, models);
  REQUIRE(labels.size() == corpus.size());

  std::vector<int> histogram(20, 0);
  for (size_t u = 0; u < corpus.size(); ++u) {
    REQUIRE(labels[u].size() == static_cast<size_t>(corpus[u].features.frames));
    const int base = corpus[u].emotion * 5;
    CHECK(labels[u].front() == base);  // entry is pinned to state 0
    for (size_t t = 0; t < labels[u].size(); ++t) {
      CHECK(labels[u][t] >= base);
      CHECK(labels[u][t] < base + 5);
      if (t > 0) CHECK(labels[u][t] >= labels[u][t - 1]);
      histogram[labels[u][t]] += 1;
    }
  }
  for (int s = 0; s < 20; ++s) CHECK(histogram[s] > 0);
}

TEST_CASE("gmm training requires data for every emotion") {
  std::vector<LabeledUtterance> corpus = block_corpus(1, 1, 20, 79);
  corpus.erase(std::remove_if(corpus.begin(), corpus.end(),
                              [](const LabeledUtterance& u) {
                                return u.emotion == 2;
                              }),
               corpus.end());
  CHECK_THROWS_AS(gmm_hmm_train(corpus, default_topology(), 1), MissingClass);
}

TEST_CASE("utterances shorter than the chain are skipped") {
  LabeledUtterance stub;
  stub.features = matrix_from_rows({{1.0}, {2.0}, {3.0}});
  stub.emotion = 0;
  stub.speaker = "a";
  // The 3 frame utterance cannot seed 5 states; alone for its emotion it
  // leaves the class empty.
  CHECK_THROWS_AS(gmm_hmm_train({stub}, default_topology({"only"}), 1),
                  MissingClass);
}

TEST_CASE("mlp gradients match finite differences") {
  Rng rng(9);
  MlpModel model = mlp_init({6, 5, 4, 3}, rng);
  std::vector<std::vector<double>> inputs(4, std::vector<double>(6));
  for (std::vector<double>& row : inputs) {
    for (double& v : row) v = rng.uniform(-2.0, 2.0);
  }
  std::vector<const double*> batch;
  for (const std::vector<double>& row : inputs) batch.push_back(row.data());
  const std::vector<int> labels = {0, 1, 2, 0};

  MlpGradients grads;
  mlp_loss_and_gradients(model, batch, labels, &grads);

  const double eps = 1e-5;
  double worst = 0.0;
  for (size_t l = 0; l < model.weights.size(); ++l) {
    for (size_t i = 0; i < model.weights[l].size() + model.biases[l].size();
         ++i) {
      const bool is_weight = i < model.weights[l].size();
      double& param = is_weight ? model.weights[l][i]
                                : model.biases[l][i - model.weights[l].size()];
      const double analytic =
          is_weight ? grads.weights[l][i]
                    : grads.biases[l][i - model.weights[l].size()];
      const double saved = param;
      param = saved + eps;
      double up = mlp_loss_and_gradients(model, batch, labels, nullptr);
      param = saved - eps;
      double down = mlp_loss_and_gradients(model, batch, labels, nullptr);
      param = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double rel = std::abs(numeric - analytic) /
                         std::max(std::abs(numeric) + std::abs(analytic), 1e-8);
      worst = std::max(worst, rel);
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("mlp posteriors form a distribution") {
  Rng rng(10);
  MlpModel model = mlp_init({7, 12, 6}, rng);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(7);
    for (double& v : x) v = rng.uniform(-3.0, 3.0);
    std::vector<double> y = mlp_posteriors(model, x.data());
    double sum = 0.0;
    for (double v : y) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("training reaches full accuracy on separable data") {
  Rng rng(11);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int n = 0; n < 200; ++n) {
    const int label = n % 2;
    const double center = label == 0 ? -1.5 : 1.5;
    rows.push_back({center + 0.2 * rng.gaussian(), rng.gaussian()});
    labels.push_back(label);
  }
  FeatureMatrix features = matrix_from_rows(rows);

  MlpConfig cfg;
  cfg.hidden = {8};
  cfg.lr_start = 0.3;
  cfg.lr_end = 0.03;
  cfg.epochs_decay = 25;
  cfg.epochs_extra = 25;
  cfg.batch_size = 32;
  cfg.seed = 7;
  MlpTrainLog log;
  MlpModel model = mlp_train(features, labels, 2, cfg, &log);

  int correct = 0;
  for (size_t n = 0; n < rows.size(); ++n) {
    std::vector<double> y = mlp_posteriors(model, rows[n].data());
    int pred = y[1] > y[0] ? 1 : 0;
    correct += pred == labels[n] ? 1 : 0;
  }
  CHECK(correct == 200);
  REQUIRE(log.epoch_loss.size() == 50);
  CHECK(log.epoch_loss.back() < log.epoch_loss.front());
}

TEST_CASE("training is deterministic at a fixed seed") {
  Rng rng(12);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int n = 0; n < 64; ++n) {
    rows.push_back({rng.gaussian(), rng.gaussian(), rng.gaussian()});
    labels.push_back(n % 3);
  }
  FeatureMatrix features = matrix_from_rows(rows);
  MlpConfig cfg;
  cfg.hidden = {6};
  cfg.epochs_decay = 3;
  cfg.epochs_extra = 2;
  cfg.batch_size = 16;
  cfg.seed = 42;
  MlpModel a = mlp_train(features, labels, 3, cfg);
  MlpModel b = mlp_train(features, labels, 3, cfg);
  REQUIRE(a.weights.size() == b.weights.size());
  for (size_t l = 0; l < a.weights.size(); ++l) {
    CHECK(a.weights[l] == b.weights[l]);
    CHECK(a.biases[l] == b.biases[l]);
  }
}

TEST_CASE("labels outside the output range are rejected") {
  FeatureMatrix features = matrix_from_rows({{0.0, 1.0}, {1.0, 0.0}});
  MlpConfig cfg;
  cfg.hidden = {4};
  cfg.epochs_decay = 1;
  cfg.epochs_extra = 0;
  CHECK_THROWS_AS(mlp_train(features, {0, 2}, 2, cfg), InvalidLabel);
  CHECK_THROWS_AS(mlp_train(features, {0, -1}, 2, cfg), InvalidLabel);
}

TEST_CASE("priors floor absent states and sum to one") {
  std::vector<std::vector<int>> labels = {{0, 0, 1, 1, 1}, {2, 3, 3}};
  StatePriors priors = priors_from_alignments(labels, 6);
  REQUIRE(priors.p.size() == 6);
  double sum = 0.0;
  for (double v : priors.p) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(priors.p[4] > 0.0);
  CHECK(priors.p[4] < 1e-7);
  CHECK(priors.p[5] > 0.0);
  CHECK(priors.p[1] == doctest::Approx(3.0 / 8.0).epsilon(1e-6));
  CHECK_THROWS_AS(priors_from_alignments({{6}}, 6), InvalidLabel);
  CHECK_THROWS_AS(priors_from_alignments({}, 6), InvalidLength);
}

TEST_CASE("scaled loglik is invariant to prior scaling") {
  Rng rng(13);
  std::vector<std::vector<double>> posteriors(5, std::vector<double>(6));
  for (std::vector<double>& row : posteriors) {
    double sum = 0.0;
    for (double& v : row) {
      v = rng.uniform(0.01, 1.0);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
  StatePriors priors;
  priors.p = {0.1, 0.2, 0.3, 0.1, 0.1, 0.2};
  StatePriors doubled;
  for (double v : priors.p) doubled.p.push_back(2.0 * v);

  std::vector<std::vector<double>> a = scaled_loglik(posteriors, priors);
  std::vector<std::vector<double>> b = scaled_loglik(posteriors, doubled);
  for (size_t t = 0; t < a.size(); ++t) {
    for (size_t s = 0; s < a[t].size(); ++s) CHECK(a[t][s] == b[t][s]);
  }
}

TEST_CASE("scaled loglik divides the priors out") {
  StatePriors priors;
  priors.p = {0.4, 0.3, 0.2, 0.1};
  // A posterior row equal to the priors carries no evidence; the scaled
  // scores collapse to a constant.
  std::vector<std::vector<double>> scores = scaled_loglik({priors.p}, priors);
  for (int s = 1; s < 4; ++s) {
    CHECK(scores[0][s] == doctest::Approx(scores[0][0]).epsilon(1e-12));
  }

  StatePriors uniform;
  uniform.p = {0.25, 0.25, 0.25, 0.25};
  std::vector<std::vector<double>> shifted =
      scaled_loglik({{0.7, 0.1, 0.1, 0.1}}, uniform);
  for (int s = 0; s < 4; ++s) {
    double expected = std::log(s == 0 ? 0.7 : 0.1) + std::log(4.0);
    CHECK(shifted[0][s] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("decode picks the emotion with the best path") {
  HmmTopology topo = default_topology();
  std::vector<std::vector<double>> scores(6, std::vector<double>(20, -10.0));
  for (std::vector<double>& row : scores) {
    for (int s = 0; s < 5; ++s) row[2 * 5 + s] = -1.0;
  }
  DecodeResult r = decode_scores(scores, topo);
  CHECK(r.emotion == 2);
  REQUIRE(r.logliks.size() == 4);
  for (int e = 0; e < 4; ++e) {
    if (e != 2) CHECK(r.logliks[2] > r.logliks[e]);
  }
}

TEST_CASE("decode permutes with the emotion order") {
  Rng rng(14);
  HmmTopology topo = default_topology();
  std::vector<std::vector<double>> scores(8, std::vector<double>(20));
  for (std::vector<double>& row : scores) {
    for (double& v : row) v = rng.uniform(-6.0, 0.0);
  }
  DecodeResult base = decode_scores(scores, topo);

  const std::vector<int> perm = {3, 0, 2, 1};  // new position -> old emotion
  HmmTopology shuffled = topo;
  std::vector<std::vector<double>> permuted(8, std::vector<double>(20));
  for (int e = 0; e < 4; ++e) {
    shuffled.emotions[e] = topo.emotions[perm[e]];
    shuffled.transitions[e] = topo.transitions[perm[e]];
    for (int t = 0; t < 8; ++t) {
      for (int s = 0; s < 5; ++s) {
        permuted[t][e * 5 + s] = scores[t][perm[e] * 5 + s];
      }
    }
  }
  DecodeResult moved = decode_scores(permuted, shuffled);
  CHECK(shuffled.emotions[moved.emotion] == topo.emotions[base.emotion]);
  for (int e = 0; e < 4; ++e) {
    CHECK(moved.logliks[e] ==
          doctest::Approx(base.logliks[perm[e]]).epsilon(1e-12));
  }
}

TEST_CASE("decode ties prefer the lexicographically smaller name") {
  HmmTopology topo = default_topology({"zeta", "alpha"}, 2);
  std::vector<std::vector<double>> scores(3, std::vector<double>(4));
  for (std::vector<double>& row : scores) {
    row[0] = row[2] = -1.0;
    row[1] = row[3] = -2.0;
  }
  DecodeResult r = decode_scores(scores, topo);
  CHECK(r.logliks[0] == r.logliks[1]);
  CHECK(topo.emotions[r.emotion] == "alpha");
}

TEST_CASE("decode rejects empty utterances") {
  HmmTopology topo = default_topology();
  CHECK_THROWS_AS(decode_scores({}, topo), EmptyUtterance);
  std::vector<LabeledUtterance> corpus = block_corpus(1, 1, 20, 81);
  GmmHmm models = gmm_hmm_train(corpus, default_topology(), 1);
  FeatureMatrix empty;
  empty.frames = 0;
  empty.dims = 20;
  empty.layout = FeatureLayout::kLda;
  CHECK_THROWS_AS(decode_gmm(empty, models), EmptyUtterance);
}

TEST_CASE("gmm decoding is self consistent on separated clusters") {
  std::vector<LabeledUtterance> corpus = block_corpus(1, 2, 20, 82);
  GmmHmm models = gmm_hmm_train(corpus, default_topology(), 2);
  for (const LabeledUtterance& utt : corpus) {
    CHECK(decode_gmm(utt.features, models).emotion == utt.emotion);
  }
}

TEST_CASE("evaluate arithmetic matches hand counts") {
  Metrics m = evaluate({0, 0, 0, 0}, {0, 0, 0, 1}, 2);
  CHECK(m.wa == doctest::Approx(75.0).epsilon(1e-12));
  CHECK(m.uwa == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(m.counts[0][0] == 3);
  CHECK(m.counts[1][0] == 1);
  CHECK(m.confusion[0][0] == doctest::Approx(100.0));
  CHECK(m.confusion[1][0] == doctest::Approx(100.0));
  CHECK(m.confusion[1][1] == doctest::Approx(0.0));

  Metrics perfect = evaluate({0, 1, 2}, {0, 1, 2}, 3);
  CHECK(perfect.wa == doctest::Approx(100.0));
  CHECK(perfect.uwa == doctest::Approx(100.0));
  for (int c = 0; c < 3; ++c) {
    double row = 0.0;
    for (int k = 0; k < 3; ++k) row += perfect.confusion[c][k];
    CHECK(row == doctest::Approx(100.0).epsilon(1e-9));
  }
}

TEST_CASE("evaluate excludes absent classes from the average") {
  Metrics m = evaluate({0, 1, 1}, {0, 1, 0}, 3);
  CHECK(m.wa == doctest::Approx(200.0 / 3.0));
  // Class 2 has no reference items: UWA averages the two present recalls.
  CHECK(m.uwa == doctest::Approx(75.0));
  for (int k = 0; k < 3; ++k) CHECK(m.confusion[2][k] == 0.0);
}

TEST_CASE("evaluate rejects malformed input") {
  CHECK_THROWS_AS(evaluate({0}, {0, 1}, 2), InvalidLength);
  CHECK_THROWS_AS(evaluate({}, {}, 2), InvalidLength);
  CHECK_THROWS_AS(evaluate({2}, {0}, 2), InvalidLabel);
  CHECK_THROWS_AS(evaluate({0}, {-1}, 2), InvalidLabel);
}

TEST_CASE("recall averaging reproduces the reference table") {
  const double avg =
      unweighted_average({60.21, 58.17, 59.71, 60.25});
  CHECK(std::abs(avg - 59.58) <= 0.01);
}

TEST_CASE("the full stack classifies its training corpus") {
  std::vector<LabeledUtterance> corpus = block_corpus(2, 2, 20, 83);
  Recognizer model = train_recognizer(corpus, quick_system_config());
  int correct = 0;
  for (const LabeledUtterance& utt : corpus) {
    DecodeResult r = recognize(model, utt.features);
    correct += r.emotion == utt.emotion ? 1 : 0;
  }
  CHECK(correct == static_cast<int>(corpus.size()));
}

TEST_CASE("system training is deterministic") {
  std::vector<LabeledUtterance> corpus = block_corpus(1, 2, 20, 84);
  SystemConfig config = quick_system_config();
  Recognizer a = train_recognizer(corpus, config);
  Recognizer b = train_recognizer(corpus, config);
  CHECK(recognizer_to_bytes(a) == recognizer_to_bytes(b));
}

TEST_CASE("recognizers round trip through the container") {
  std::vector<LabeledUtterance> corpus = block_corpus(1, 2, 20, 85);
  Recognizer model = train_recognizer(corpus, quick_system_config());
  const std::string bytes = recognizer_to_bytes(model);
  Recognizer back = recognizer_from_bytes(bytes);
  CHECK(recognizer_to_bytes(back) == bytes);
  for (const LabeledUtterance& utt : corpus) {
    DecodeResult lhs = recognize(model, utt.features);
    DecodeResult rhs = recognize(back, utt.features);
    CHECK(lhs.emotion == rhs.emotion);
    for (size_t e = 0; e < lhs.logliks.size(); ++e) {
      CHECK(lhs.logliks[e] == rhs.logliks[e]);
    }
  }

  const std::string path = "test_classifier_roundtrip.emhm";
  write_recognizer(path, model);
  Recognizer from_disk = read_recognizer(path);
  CHECK(recognizer_to_bytes(from_disk) == bytes);
  std::remove(path.c_str());
}

TEST_CASE("damaged containers are rejected") {
  std::vector<LabeledUtterance> corpus = block_corpus(1, 1, 20, 86);
  SystemConfig config = quick_system_config();
  config.mlp.epochs_decay = 1;
  config.mlp.epochs_extra = 0;
  Recognizer model = train_recognizer(corpus, config);
  std::string bytes = recognizer_to_bytes(model);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(recognizer_from_bytes(bad_magic), IoError);
  CHECK_THROWS_AS(recognizer_from_bytes(bytes.substr(0, bytes.size() / 2)),
                  IoError);
  CHECK_THROWS_AS(recognizer_from_bytes(bytes + std::string(4, '\0')), IoError);
  std::string bad_version = bytes;
  bad_version[4] = 9;
  CHECK_THROWS_AS(recognizer_from_bytes(bad_version), IoError);
  CHECK_THROWS_AS(read_recognizer("no_such_dir/missing.emhm"), IoError);
}

TEST_CASE("cross validation holds each speaker out once") {
  std::vector<LabeledUtterance> corpus = block_corpus(2, 2, 20, 87);
  SystemConfig config = quick_system_config();
  XvalResult result = cross_validate(corpus, config);
  REQUIRE(result.folds.size() == 2);

  std::set<size_t> seen;
  for (const FoldMetrics& fold : result.folds) {
    for (size_t u : fold.test_indices) {
      CHECK(corpus[u].speaker == fold.speaker);
      CHECK(seen.insert(u).second);  // disjoint folds
    }
  }
  CHECK(seen.size() == corpus.size());
  CHECK(result.wa_mean >= 0.0);
  CHECK(result.wa_mean <= 100.0);
  // The clusters barely move between speakers, so held-out decoding
  // succeeds outright.
  CHECK(result.wa_mean == doctest::Approx(100.0));
  CHECK(result.uwa_mean == doctest::Approx(100.0));
  CHECK(result.wa_std == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("cross validation needs at least two speakers") {
  std::vector<LabeledUtterance> corpus = block_corpus(1, 2, 20, 88);
  CHECK_THROWS_AS(cross_validate(corpus, quick_system_config()),
                  InsufficientSpeakers);
}
