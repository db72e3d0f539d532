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

#include "xmodal/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include "xmodal/cmrloss.hpp"

namespace xmodal {

void RetrievalManifest::validate() const {
  std::set<std::string> keys;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string where = "manifest record " + std::to_string(i);
    if (!keys.insert(r.key).second) {
      throw std::invalid_argument(where + ": duplicate key '" + r.key + "'");
    }
    if (r.person_id < 0) throw std::invalid_argument(where + ": field 'id' is negative");
    if (r.camera_id < 0) throw std::invalid_argument(where + ": field 'cam' is negative");
  }
}

RetrievalManifest RetrievalManifest::subset(std::span<const std::size_t> indices) const {
  RetrievalManifest out;
  out.records.reserve(indices.size());
  for (std::size_t i : indices) out.records.push_back(records.at(i));
  return out;
}

namespace {

std::vector<std::size_t> order_by_distance(const std::vector<double>& dist) {
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  return order;
}

void require_cross_modal(const RetrievalManifest& query, const RetrievalManifest& gallery) {
  if (query.records.empty()) return;
  const Modality m = query.records.front().modality;
  for (const auto& q : query.records) {
    if (q.modality != m) {
      throw std::invalid_argument("evaluate: query set mixes modalities");
    }
  }
  for (const auto& g : gallery.records) {
    if (g.modality == m) {
      throw std::invalid_argument("evaluate: gallery record '" + g.key +
                                  "' has the query modality");
    }
  }
}

}  // namespace

std::vector<std::size_t> rank_gallery(std::span<const double> query, const Matrix& gallery) {
  return order_by_distance(cosine_distance_row(query, gallery));
}

std::optional<QueryMetrics> query_metrics(std::span<const RankedEntry> ranked) {
  QueryMetrics m;
  std::size_t rank = 0;
  std::size_t hits = 0;
  std::size_t last_hit_rank = 0;
  double precision_sum = 0.0;
  for (const auto& e : ranked) {
    if (!e.valid) continue;
    ++rank;
    if (!e.positive) continue;
    ++hits;
    if (hits == 1) m.first_hit_rank = rank;
    precision_sum += static_cast<double>(hits) / static_cast<double>(rank);
    last_hit_rank = rank;
  }
  if (hits == 0) return std::nullopt;
  m.average_precision = precision_sum / static_cast<double>(hits);
  m.inp = static_cast<double>(hits) / static_cast<double>(last_hit_rank);
  return m;
}

MetricsReport evaluate(const EvalSet& query, const EvalSet& gallery, const EvalConfig& cfg,
                       std::vector<QueryRanking>* rankings) {
  if (query.embeddings.rows() != query.manifest.size() ||
      gallery.embeddings.rows() != gallery.manifest.size()) {
    throw std::invalid_argument("evaluate: embedding rows do not match manifest records");
  }
  require_cross_modal(query.manifest, gallery.manifest);

  MetricsReport report;
  std::vector<std::size_t> hit_ranks;
  double ap_sum = 0.0;
  double inp_sum = 0.0;
  std::vector<RankedEntry> ranked(gallery.manifest.size());

  for (std::size_t i = 0; i < query.manifest.size(); ++i) {
    const auto& q = query.manifest.records[i];
    const auto dist = cosine_distance_row(query.embeddings.row(i), gallery.embeddings);
    const auto order = order_by_distance(dist);
    for (std::size_t r = 0; r < order.size(); ++r) {
      const auto& g = gallery.manifest.records[order[r]];
      ranked[r].positive = g.person_id == q.person_id;
      ranked[r].valid =
          !(cfg.camera_filter && g.person_id == q.person_id && g.camera_id == q.camera_id);
    }
    if (rankings) {
      QueryRanking qr;
      qr.query_index = i;
      for (std::size_t r = 0; r < order.size(); ++r) {
        if (!ranked[r].valid) continue;
        qr.gallery_order.push_back(order[r]);
        qr.distances.push_back(dist[order[r]]);
      }
      rankings->push_back(std::move(qr));
    }
    const auto m = query_metrics(ranked);
    if (!m) {
      ++report.n_skipped;
      continue;
    }
    hit_ranks.push_back(m->first_hit_rank);
    ap_sum += m->average_precision;
    inp_sum += m->inp;
  }

  report.n_queries = hit_ranks.size();
  const double denom = report.n_queries ? static_cast<double>(report.n_queries) : 1.0;
  for (int k : cfg.cmc_ranks) {
    const auto within = std::count_if(hit_ranks.begin(), hit_ranks.end(), [k](std::size_t r) {
      return r <= static_cast<std::size_t>(k);
    });
    report.cmc[k] = static_cast<double>(within) / denom;
  }
  report.map_score = ap_sum / denom;
  report.minp = inp_sum / denom;
  return report;
}

std::vector<std::size_t> sample_gallery_shot(const RetrievalManifest& manifest,
                                             std::size_t shot, Rng& rng) {
  // std::map keeps the (person, camera) visiting order independent of input order.
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    const auto& r = manifest.records[i];
    groups[{r.person_id, r.camera_id}].push_back(i);
  }
  std::vector<std::size_t> chosen;
  for (auto& [key, members] : groups) {
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t take = std::min(shot, members.size());
    chosen.insert(chosen.end(), members.begin(), members.begin() + take);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

MetricsReport evaluate_repeated(const EvalSet& query, const EvalSet& gallery,
                                const EvalConfig& cfg, std::size_t shot,
                                std::size_t repeats, Rng& rng) {
  if (repeats == 0) {
    throw std::invalid_argument("evaluate_repeated: repeats must be >= 1");
  }
  MetricsReport mean;
  for (std::size_t run = 0; run < repeats; ++run) {
    const auto idx = sample_gallery_shot(gallery.manifest, shot, rng);
    const EvalSet sub{gallery.embeddings.select_rows(idx), gallery.manifest.subset(idx)};
    const auto r = evaluate(query, sub, cfg);
    for (const auto& [k, v] : r.cmc) mean.cmc[k] += v / static_cast<double>(repeats);
    mean.map_score += r.map_score / static_cast<double>(repeats);
    mean.minp += r.minp / static_cast<double>(repeats);
    mean.n_queries += r.n_queries;
    mean.n_skipped += r.n_skipped;
  }
  return mean;
}

}  // namespace xmodal
