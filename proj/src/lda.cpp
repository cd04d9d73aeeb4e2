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

#include "emorec/lda.hpp"

#include <Eigen/Dense>
#include <iostream>
#include <string>
#include <vector>

#include "emorec/common.hpp"

namespace emorec {

LdaTransform lda_fit(const std::vector<FeatureMatrix>& data,
                     const std::vector<std::vector<int>>& labels,
                     int n_classes, int lda_dim) {
  if (n_classes < 2) throw MissingClass("lda needs at least two classes");
  if (data.size() != labels.size()) {
    throw InvalidLength("one label sequence per feature matrix");
  }
  if (data.empty()) throw MissingClass("no frames for any class");
  const int d = data.front().dims;
  if (lda_dim < 1 || lda_dim > d) {
    throw DimensionMismatch("lda_dim must lie in [1, input_dim]");
  }

  // Scatter accumulation in sufficient-statistics form: class sums and
  // counts plus the global second moment. These merge associatively, so a
  // sharded accumulation would land on the same matrices.
  Eigen::MatrixXd moment = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd class_sums = Eigen::MatrixXd::Zero(d, n_classes);
  std::vector<int64_t> counts(static_cast<size_t>(n_classes), 0);
  int64_t total = 0;
  for (size_t u = 0; u < data.size(); ++u) {
    const FeatureMatrix& m = data[u];
    validate(m);
    if (m.dims != d) throw DimensionMismatch("feature dims differ across data");
    if (labels[u].size() != static_cast<size_t>(m.frames)) {
      throw InvalidLength("label sequence length differs from frame count");
    }
    for (int64_t f = 0; f < m.frames; ++f) {
      const int c = labels[u][static_cast<size_t>(f)];
      if (c < 0 || c >= n_classes) {
        throw InvalidLabel("label " + std::to_string(c) + " outside [0, " +
                           std::to_string(n_classes) + ")");
      }
      Eigen::Map<const Eigen::VectorXd> x(m.values.data() + f * m.dims, d);
      moment.noalias() += x * x.transpose();
      class_sums.col(c) += x;
      ++counts[static_cast<size_t>(c)];
      ++total;
    }
  }
  for (int c = 0; c < n_classes; ++c) {
    if (counts[static_cast<size_t>(c)] == 0) {
      throw MissingClass("class " + std::to_string(c) + " has no frames");
    }
  }
  if (total <= d) {
    throw InvalidLength("need more frames than input dims to fit lda");
  }

  Eigen::VectorXd grand = class_sums.rowwise().sum() / static_cast<double>(total);
  Eigen::MatrixXd between = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd within = moment;
  for (int c = 0; c < n_classes; ++c) {
    const double n_c = static_cast<double>(counts[static_cast<size_t>(c)]);
    const Eigen::VectorXd mean_c = class_sums.col(c) / n_c;
    within.noalias() -= n_c * mean_c * mean_c.transpose();
    const Eigen::VectorXd dev = mean_c - grand;
    between.noalias() += n_c * dev * dev.transpose();
  }
  // Covariance form: dividing both scatters by the frame count leaves the
  // regularized eigenproblem unchanged (the trace-based lambda scales
  // along) but pins the eigenvector normalization to the within-class
  // covariance, so projected features carry unit within-class variance.
  within /= static_cast<double>(total);
  between /= static_cast<double>(total);
  within = 0.5 * (within + within.transpose()).eval();
  between = 0.5 * (between + between.transpose()).eval();

  double lambda = 1e-4 * within.trace() / d;
  if (!(lambda > 0.0)) lambda = 1e-8;
  within.diagonal().array() += lambda;

  // Generalized symmetric problem S_b v = mu (S_w + lambda I) v; its
  // eigenvectors are those of (S_w + lambda I)^-1 S_b, in ascending order
  // of mu.
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(between,
                                                                   within);
  if (solver.info() != Eigen::Success) {
    throw Error("lda eigensolver did not converge");
  }
  if (lda_dim > n_classes - 1) {
    std::cerr << "lda: " << lda_dim
              << " dims exceed the between-class rank bound "
              << (n_classes - 1)
              << "; extra directions come from the regularized "
                 "within-class spectrum\n";
  }

  LdaTransform t;
  t.class_count = n_classes;
  t.input_dim = d;
  t.lda_dim = lda_dim;
  t.matrix.assign(static_cast<size_t>(lda_dim) * static_cast<size_t>(d), 0.0);
  for (int r = 0; r < lda_dim; ++r) {
    const Eigen::VectorXd v = solver.eigenvectors().col(d - 1 - r);
    for (int j = 0; j < d; ++j) {
      t.matrix[static_cast<size_t>(r) * static_cast<size_t>(d) +
               static_cast<size_t>(j)] = v(j);
    }
  }
  return t;
}

FeatureMatrix lda_apply(const LdaTransform& t, const FeatureMatrix& m) {
  validate(m);
  if (m.dims != t.input_dim) {
    throw DimensionMismatch("matrix dims " + std::to_string(m.dims) +
                            " differ from the fitted input dim " +
                            std::to_string(t.input_dim));
  }
  FeatureMatrix out;
  out.layout = FeatureLayout::kLda;
  out.dims = t.lda_dim;
  out.frames = m.frames;
  out.values.assign(static_cast<size_t>(out.frames) * out.dims, 0.0);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      projection(t.matrix.data(), t.lda_dim, t.input_dim);
  for (int64_t f = 0; f < m.frames; ++f) {
    Eigen::Map<const Eigen::VectorXd> x(m.values.data() + f * m.dims, m.dims);
    Eigen::Map<Eigen::VectorXd> y(out.values.data() + f * out.dims, out.dims);
    y.noalias() = projection * x;
  }
  return out;
}

}  // namespace emorec
