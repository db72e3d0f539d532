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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xmodal/matrix.hpp"
#include "xmodal/types.hpp"

namespace xmodal {

struct ManifestRecord {
  std::string key;
  std::int64_t person_id = 0;
  std::int64_t camera_id = 0;
  Modality modality = Modality::kVisible;

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

/// Ordered sample records; record i describes embedding row i.
struct RetrievalManifest {
  std::vector<ManifestRecord> records;

  std::size_t size() const { return records.size(); }
  /// Unique keys, nonnegative ids. Throws std::invalid_argument.
  void validate() const;
  RetrievalManifest subset(std::span<const std::size_t> indices) const;

  friend bool operator==(const RetrievalManifest&, const RetrievalManifest&) = default;
};

struct MetricsReport {
  std::map<int, double> cmc;  // rank-k -> fraction of queries hit within k
  double map_score = 0.0;
  double minp = 0.0;
  std::size_t n_queries = 0;
  std::size_t n_skipped = 0;
};

/// Gallery indices by ascending cosine distance; equal distances keep
/// gallery order.
std::vector<std::size_t> rank_gallery(std::span<const double> query, const Matrix& gallery);

/// One entry of a ranked gallery list.
struct RankedEntry {
  bool positive = false;
  bool valid = true;
};

struct QueryMetrics {
  std::size_t first_hit_rank = 0;  // 1-based, over valid entries
  double average_precision = 0.0;
  double inp = 0.0;  // positives / rank of the last positive
};

/// Returns nullopt when no valid entry is positive.
std::optional<QueryMetrics> query_metrics(std::span<const RankedEntry> ranked);

struct EvalConfig {
  /// Drop gallery entries sharing both person and camera with the query.
  bool camera_filter = true;
  std::vector<int> cmc_ranks = {1, 10, 20};
};

struct EvalSet {
  Matrix embeddings;
  RetrievalManifest manifest;
};

/// Ranked list of one query, for inspection dumps.
struct QueryRanking {
  std::size_t query_index = 0;
  std::vector<std::size_t> gallery_order;  // valid entries only
  std::vector<double> distances;
};

/// Ranks every query against the gallery and aggregates CMC, mAP and mINP.
/// Queries and gallery must come from different modalities.
MetricsReport evaluate(const EvalSet& query, const EvalSet& gallery, const EvalConfig& cfg,
                       std::vector<QueryRanking>* rankings = nullptr);

/// Indices of a gallery sub-manifest holding min(shot, available) randomly
/// chosen samples of every (person, camera) pair, in manifest order.
std::vector<std::size_t> sample_gallery_shot(const RetrievalManifest& manifest,
                                             std::size_t shot, Rng& rng);

/// Mean of `repeats` evaluations, each on a freshly sampled gallery.
MetricsReport evaluate_repeated(const EvalSet& query, const EvalSet& gallery,
                                const EvalConfig& cfg, std::size_t shot,
                                std::size_t repeats, Rng& rng);

}  // namespace xmodal
