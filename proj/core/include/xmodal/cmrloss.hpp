// Copyright 2026 The xmodal Authors. All Rights Reserved.
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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xmodal/diffrank.hpp"
#include "xmodal/matrix.hpp"
#include "xmodal/types.hpp"

namespace xmodal {

/// B x D embeddings with per-row identity and modality labels.
struct EmbeddingBatch {
  Matrix embeddings;
  std::vector<std::int64_t> ids;
  std::vector<Modality> modalities;

  std::size_t size() const { return embeddings.rows(); }

  /// Shape agreement and no all-zero rows. Throws std::invalid_argument.
  void validate() const;
};

/// Components of the training objective and its gradient with respect to
/// the embeddings. classifier_grad is empty when no ID head took part.
struct LossReport {
  double total = 0.0;
  double id_component = 0.0;
  double cmr_component = 0.0;
  Matrix grad;
  Matrix classifier_grad;
};

/// d_j = (1 - cos(q, g_j)) / 2 for every row g_j of gallery. Used verbatim by
/// both the loss and the evaluation code.
std::vector<double> cosine_distance_row(std::span<const double> query, const Matrix& gallery);

struct DistanceRowGrad {
  std::vector<double> grad_query;
  Matrix grad_gallery;
};

/// Gradients of sum_j upstream_j * d_j with respect to the query and every
/// gallery row.
DistanceRowGrad cosine_distance_row_grad(std::span<const double> query, const Matrix& gallery,
                                         std::span<const double> upstream);

/// 1 where the gallery identity matches the query, n elsewhere.
std::vector<double> target_ranks(std::int64_t query_id,
                                 std::span<const std::int64_t> gallery_ids);

/// (1/n) * sum_j |r_j - t_j|.
double footrule(std::span<const double> ranks, std::span<const double> targets);

/// Cross-modality retrieval loss. Every sample queries the samples of the
/// other modality in the batch; the loss is the mean footrule between soft
/// ranks of the cosine distances and target_ranks. Gradients flow into both
/// query and gallery rows. Fills cmr_component, total and grad.
LossReport cmr_loss(const EmbeddingBatch& batch, const SoftRankParams& params);

struct IdLossResult {
  double loss = 0.0;
  Matrix grad_embeddings;
  Matrix grad_classifier;
};

/// Mean softmax cross-entropy over logits = embeddings * classifier^T.
IdLossResult id_loss(const Matrix& embeddings, const Matrix& classifier,
                     std::span<const std::int64_t> labels);

/// Unweighted sum of id_loss (labels = batch.ids) and cmr_loss.
LossReport total_loss(const EmbeddingBatch& batch, const Matrix& classifier,
                      const SoftRankParams& params);

}  // namespace xmodal
