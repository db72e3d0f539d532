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

#include "xmodal/cmrloss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xmodal {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double checked_norm(std::span<const double> v) {
  const double n = std::sqrt(dot(v, v));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("cosine distance of a zero-norm or non-finite vector");
  }
  return n;
}

}  // namespace

void EmbeddingBatch::validate() const {
  if (ids.size() != embeddings.rows() || modalities.size() != embeddings.rows()) {
    throw std::invalid_argument("embedding batch: label count does not match row count");
  }
  for (std::size_t i = 0; i < embeddings.rows(); ++i) {
    checked_norm(embeddings.row(i));
  }
}

std::vector<double> cosine_distance_row(std::span<const double> query, const Matrix& gallery) {
  if (query.size() != gallery.cols()) {
    throw std::invalid_argument("cosine distance: dimension mismatch");
  }
  const double qn = checked_norm(query);
  std::vector<double> d(gallery.rows());
  for (std::size_t j = 0; j < gallery.rows(); ++j) {
    const auto g = gallery.row(j);
    const double cosine = dot(query, g) / (qn * checked_norm(g));
    d[j] = std::clamp((1.0 - cosine) / 2.0, 0.0, 1.0);
  }
  return d;
}

DistanceRowGrad cosine_distance_row_grad(std::span<const double> query, const Matrix& gallery,
                                         std::span<const double> upstream) {
  if (query.size() != gallery.cols()) {
    throw std::invalid_argument("cosine distance: dimension mismatch");
  }
  if (upstream.size() != gallery.rows()) {
    throw std::invalid_argument("cosine distance: upstream length mismatch");
  }
  const std::size_t dim = query.size();
  const double qn = checked_norm(query);
  DistanceRowGrad out{std::vector<double>(dim, 0.0), Matrix(gallery.rows(), dim)};
  for (std::size_t j = 0; j < gallery.rows(); ++j) {
    const auto g = gallery.row(j);
    const double gn = checked_norm(g);
    if (upstream[j] == 0.0) continue;
    const double cosine = dot(query, g) / (qn * gn);
    // d = (1 - cos)/2, so each gradient is -upstream/2 times d(cos).
    const double w = -0.5 * upstream[j];
    auto gg = out.grad_gallery.row(j);
    for (std::size_t k = 0; k < dim; ++k) {
      out.grad_query[k] += w * (g[k] / (qn * gn) - cosine * query[k] / (qn * qn));
      gg[k] = w * (query[k] / (qn * gn) - cosine * g[k] / (gn * gn));
    }
  }
  return out;
}

std::vector<double> target_ranks(std::int64_t query_id,
                                 std::span<const std::int64_t> gallery_ids) {
  const auto n = static_cast<double>(gallery_ids.size());
  std::vector<double> t(gallery_ids.size());
  for (std::size_t j = 0; j < gallery_ids.size(); ++j) {
    t[j] = gallery_ids[j] == query_id ? 1.0 : n;
  }
  return t;
}

double footrule(std::span<const double> ranks, std::span<const double> targets) {
  if (ranks.size() != targets.size()) {
    throw std::invalid_argument("footrule: length mismatch (" + std::to_string(ranks.size()) +
                                " vs " + std::to_string(targets.size()) + ")");
  }
  if (ranks.empty()) {
    throw std::invalid_argument("footrule: empty rank vectors");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < ranks.size(); ++j) s += std::abs(ranks[j] - targets[j]);
  return s / static_cast<double>(ranks.size());
}

LossReport cmr_loss(const EmbeddingBatch& batch, const SoftRankParams& params) {
  batch.validate();
  params.validate();
  const std::size_t b = batch.size();

  std::vector<std::size_t> members[2];
  for (std::size_t i = 0; i < b; ++i) {
    members[static_cast<int>(batch.modalities[i])].push_back(i);
  }
  if (members[0].empty() || members[1].empty()) {
    throw std::invalid_argument("cmr_loss: batch must contain both modalities");
  }
  const Matrix galleries[2] = {batch.embeddings.select_rows(members[0]),
                               batch.embeddings.select_rows(members[1])};
  std::vector<std::int64_t> gallery_ids[2];
  for (int m = 0; m < 2; ++m) {
    for (std::size_t idx : members[m]) gallery_ids[m].push_back(batch.ids[idx]);
  }

  LossReport report;
  report.grad = Matrix(b, batch.embeddings.cols());
  const double inv_b = 1.0 / static_cast<double>(b);

  for (std::size_t i = 0; i < b; ++i) {
    const int m = static_cast<int>(opposite(batch.modalities[i]));
    const Matrix& gallery = galleries[m];
    const auto query = batch.embeddings.row(i);

    const auto dist = cosine_distance_row(query, gallery);
    const SoftRank ranker(dist, params);
    const auto& ranks = ranker.ranks();
    const auto targets = target_ranks(batch.ids[i], gallery_ids[m]);
    report.cmr_component += footrule(ranks, targets) * inv_b;

    const double n = static_cast<double>(ranks.size());
    std::vector<double> d_ranks(ranks.size());
    for (std::size_t j = 0; j < ranks.size(); ++j) {
      const double diff = ranks[j] - targets[j];
      d_ranks[j] = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      d_ranks[j] *= inv_b / n;
    }
    const auto d_dist = ranker.vjp(d_ranks);
    const auto g = cosine_distance_row_grad(query, gallery, d_dist);

    auto gq = report.grad.row(i);
    for (std::size_t k = 0; k < gq.size(); ++k) gq[k] += g.grad_query[k];
    for (std::size_t j = 0; j < gallery.rows(); ++j) {
      auto dst = report.grad.row(members[m][j]);
      const auto src = g.grad_gallery.row(j);
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
    }
  }
  report.total = report.cmr_component;
  return report;
}

IdLossResult id_loss(const Matrix& embeddings, const Matrix& classifier,
                     std::span<const std::int64_t> labels) {
  const std::size_t b = embeddings.rows();
  const std::size_t classes = classifier.rows();
  if (classifier.cols() != embeddings.cols()) {
    throw std::invalid_argument("id_loss: classifier dimension mismatch");
  }
  if (labels.size() != b || b == 0) {
    throw std::invalid_argument("id_loss: label count does not match batch size");
  }
  for (auto y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw std::invalid_argument("id_loss: label " + std::to_string(y) + " outside [0, " +
                                  std::to_string(classes) + ")");
    }
  }

  IdLossResult out{0.0, Matrix(b, embeddings.cols()), Matrix(classes, embeddings.cols())};
  const double inv_b = 1.0 / static_cast<double>(b);
  std::vector<double> prob(classes);
  for (std::size_t i = 0; i < b; ++i) {
    const auto e = embeddings.row(i);
    double max_logit = -INFINITY;
    for (std::size_t c = 0; c < classes; ++c) {
      prob[c] = dot(e, classifier.row(c));
      max_logit = std::max(max_logit, prob[c]);
    }
    double z = 0.0;
    for (double& p : prob) {
      p = std::exp(p - max_logit);
      z += p;
    }
    const auto y = static_cast<std::size_t>(labels[i]);
    out.loss -= (std::log(prob[y]) - std::log(z)) * inv_b;

    auto ge = out.grad_embeddings.row(i);
    for (std::size_t c = 0; c < classes; ++c) {
      const double dlogit = (prob[c] / z - (c == y ? 1.0 : 0.0)) * inv_b;
      const auto w = classifier.row(c);
      auto gw = out.grad_classifier.row(c);
      for (std::size_t k = 0; k < e.size(); ++k) {
        ge[k] += dlogit * w[k];
        gw[k] += dlogit * e[k];
      }
    }
  }
  return out;
}

LossReport total_loss(const EmbeddingBatch& batch, const Matrix& classifier,
                      const SoftRankParams& params) {
  LossReport report = cmr_loss(batch, params);
  auto id = id_loss(batch.embeddings, classifier, batch.ids);
  report.id_component = id.loss;
  report.total = report.id_component + report.cmr_component;
  auto& g = report.grad.data();
  const auto& gid = id.grad_embeddings.data();
  for (std::size_t k = 0; k < g.size(); ++k) g[k] += gid[k];
  report.classifier_grad = std::move(id.grad_classifier);
  return report;
}

}  // namespace xmodal
