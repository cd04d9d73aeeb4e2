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
// Fisher linear discriminant analysis over labeled frame features. The
// between-class scatter of C classes has rank at most C - 1, so a target
// dimension beyond that draws its extra directions from the regularized
// within-class spectrum; that keeps the paper pipeline's wide projection
// well defined while a warning flags the rank excess.

#ifndef EMOREC_LDA_HPP_
#define EMOREC_LDA_HPP_

#include <vector>

#include "emorec/features.hpp"

namespace emorec {

constexpr int kDefaultLdaDim = 80;

struct LdaTransform {
  std::vector<double> matrix;  // row-major lda_dim x input_dim
  int class_count = 0;
  int input_dim = 0;
  int lda_dim = 0;
};

/// Fits the transform on per-frame labeled data: rows are the top lda_dim
/// eigenvectors of (S_w + lambda I)^-1 S_b with
/// lambda = 1e-4 trace(S_w) / input_dim, normalized so the projection
/// whitens the within-class covariance. Labels run one sequence per
/// matrix, values in [0, n_classes). Throws MissingClass when a class has
/// no frames, InvalidLabel on an out-of-range label, InvalidLength when
/// label sequences and frames disagree or the pool has no more frames than
/// input dims, DimensionMismatch on inconsistent dims or an infeasible
/// lda_dim.
LdaTransform lda_fit(const std::vector<FeatureMatrix>& data,
                     const std::vector<std::vector<int>>& labels,
                     int n_classes, int lda_dim = kDefaultLdaDim);

/// Projects each frame, yielding an LDA-layout matrix of lda_dim columns.
/// Throws DimensionMismatch when the input dims differ from the fit.
FeatureMatrix lda_apply(const LdaTransform& t, const FeatureMatrix& m);

}  // namespace emorec

#endif  // EMOREC_LDA_HPP_
