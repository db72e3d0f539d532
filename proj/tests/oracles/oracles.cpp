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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {

std::vector<double> isotonic_qp(std::span<const double> y, double tol) {
  const std::size_t n = y.size();
  std::vector<double> x(y.begin(), y.end());
  if (n < 2) return x;
  // x = y - D^T mu with (D x)_i = x_i - x_{i+1}; dual gradient is D x.
  std::vector<double> mu(n - 1, 0.0);
  const double step = 0.25;  // 1 / ||D D^T|| upper bound
  for (int iter = 0; iter < 2000000; ++iter) {
    double moved = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double next = std::max(0.0, mu[i] + step * (x[i] - x[i + 1]));
      moved = std::max(moved, std::abs(next - mu[i]));
      mu[i] = next;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double dt = 0.0;
      if (i + 1 < n) dt += mu[i];
      if (i > 0) dt -= mu[i - 1];
      x[i] = y[i] - dt;
    }
    if (moved < tol) break;
  }
  return x;
}

double permutahedron_projection_violation(std::span<const double> z,
                                          std::span<const double> x) {
  const std::size_t n = x.size();
  double worst = 0.0;
  // Membership: descending prefix sums of x bounded by those of (n..1),
  // with equal totals.
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.rbegin(), sorted.rend());
  double px = 0.0, pw = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    px += sorted[k];
    pw += static_cast<double>(n - k);
    worst = std::max(worst, px - pw);
  }
  worst = std::max(worst, std::abs(px - pw));
  // Optimality over vertices.
  std::vector<double> v(n);
  std::iota(v.begin(), v.end(), 1.0);
  do {
    double ip = 0.0;
    for (std::size_t i = 0; i < n; ++i) ip += (z[i] - x[i]) * (v[i] - x[i]);
    worst = std::max(worst, ip);
  } while (std::next_permutation(v.begin(), v.end()));
  return worst;
}

double footrule(std::span<const double> r, std::span<const double> t) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += std::abs(r[i] - t[i]);
  return s / static_cast<double>(r.size());
}

double min_footrule_brute_force(const std::vector<bool>& positive) {
  const std::size_t n = positive.size();
  std::vector<double> target(n), perm(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = positive[i] ? 1.0 : static_cast<double>(n);
  std::iota(perm.begin(), perm.end(), 1.0);
  double best = INFINITY;
  do {
    best = std::min(best, footrule(perm, target));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double min_footrule_closed_form(std::size_t n, std::size_t p) {
  const double pp = static_cast<double>(p);
  const double q = static_cast<double>(n - p);
  return (pp * (pp - 1.0) / 2.0 + q * (q - 1.0) / 2.0) / static_cast<double>(n);
}

std::vector<double> standard_grayscale(const xmodal::Image& img) {
  std::vector<double> out;
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      out.push_back(0.299 * img.at(xmodal::Channel::kRed, y, x) +
                    0.587 * img.at(xmodal::Channel::kGreen, y, x) +
                    0.114 * img.at(xmodal::Channel::kBlue, y, x));
    }
  }
  return out;
}

ListMetrics list_metrics(const std::vector<bool>& positive) {
  ListMetrics m;
  std::size_t hits = 0, last = 0;
  double precision_sum = 0.0;
  for (std::size_t k = 0; k < positive.size(); ++k) {
    if (!positive[k]) continue;
    ++hits;
    if (hits == 1) m.first_hit = k + 1;
    last = k + 1;
    precision_sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  if (hits == 0) throw std::invalid_argument("list_metrics: no positive");
  m.ap = precision_sum / static_cast<double>(hits);
  m.inp = static_cast<double>(hits) / static_cast<double>(last);
  return m;
}

namespace {

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  // Norms taken separately so parallel vectors give |cos| = 1 exactly and
  // ties stay ties; distances live in [0, 1] by definition.
  const double cosine = ab / (std::sqrt(aa) * std::sqrt(bb));
  return std::clamp((1.0 - cosine) / 2.0, 0.0, 1.0);
}

}  // namespace

Metrics brute_force_metrics(const xmodal::Matrix& query, const xmodal::RetrievalManifest& qm,
                            const xmodal::Matrix& gallery, const xmodal::RetrievalManifest& gm,
                            bool camera_filter, const std::vector<int>& ranks) {
  Metrics out;
  for (int k : ranks) out.cmc[k] = 0.0;
  for (std::size_t q = 0; q < query.rows(); ++q) {
    const auto& qr = qm.records[q];
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t g = 0; g < gallery.rows(); ++g) {
      const auto& gr = gm.records[g];
      if (camera_filter && gr.person_id == qr.person_id && gr.camera_id == qr.camera_id) continue;
      order.emplace_back(cosine_distance(query.row(q), gallery.row(g)), g);
    }
    std::sort(order.begin(), order.end());  // ties fall back to the index
    std::vector<bool> positive;
    for (const auto& [d, g] : order) positive.push_back(gm.records[g].person_id == qr.person_id);
    if (std::find(positive.begin(), positive.end(), true) == positive.end()) {
      ++out.n_skipped;
      continue;
    }
    const ListMetrics lm = list_metrics(positive);
    ++out.n_queries;
    for (int k : ranks) {
      if (lm.first_hit <= static_cast<std::size_t>(k)) out.cmc[k] += 1.0;
    }
    out.map_score += lm.ap;
    out.minp += lm.inp;
  }
  if (out.n_queries > 0) {
    const double nq = static_cast<double>(out.n_queries);
    for (auto& [k, v] : out.cmc) v /= nq;
    out.map_score /= nq;
    out.minp /= nq;
  }
  return out;
}

NumericGradient central_difference(std::vector<double>& x, const std::function<double()>& f,
                                   double step) {
  NumericGradient out;
  out.grad.resize(x.size());
  const double center = f();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = f();
    x[i] = saved - step;
    const double down = f();
    x[i] = saved;
    out.grad[i] = (up - down) / (2.0 * step);
    out.kink = std::max(out.kink, std::abs((up - center) - (center - down)) / step);
  }
  return out;
}

}  // namespace oracle
