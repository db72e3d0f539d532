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

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "xmodal/toytrain.hpp"

namespace xmodal {

namespace {

constexpr double kSoftRankTol = 1e-5;
constexpr double kCmrTol = 1e-4;
constexpr double kIdTol = 1e-6;
constexpr double kTotalTol = 1e-4;
// Kinked draws replaced per instance before the suite gives up.
constexpr std::size_t kMaxRedraws = 10;

// Central differences of f over every coordinate of x. `kink` receives the
// largest disagreement between the forward and backward one-sided
// differences, which is round-off for a smooth f and O(1) when a
// coordinate's stencil straddles a point where f is not differentiable.
std::vector<double> numeric_gradient(std::vector<double>& x,
                                     const std::function<double()>& f, double step,
                                     double& kink) {
  std::vector<double> g(x.size());
  const double center = f();
  kink = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + step;
    const double up = f();
    x[i] = saved - step;
    const double down = f();
    x[i] = saved;
    g[i] = (up - down) / (2.0 * step);
    kink = std::max(kink, std::abs((up - center) - (center - down)) / step);
  }
  return g;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Relative to the numeric gradient's largest entry. The floor keeps an
// exactly vanishing gradient (a query whose targets are all equal has a
// constant footrule) from dividing central-difference round-off, about
// 1e-10 at step 1e-6, by zero.
constexpr double kRelativeFloor = 1e-5;

double max_rel_diff(std::span<const double> analytic, std::span<const double> numeric) {
  return max_abs_diff(analytic, numeric) / std::max(max_abs(numeric), kRelativeFloor);
}

EmbeddingBatch random_batch(Rng& rng, std::size_t b, std::size_t d, std::int64_t classes) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::int64_t> label(0, classes - 1);
  EmbeddingBatch batch{Matrix(b, d), {}, {}};
  for (double& x : batch.embeddings.data()) x = normal(rng);
  for (std::size_t i = 0; i < b; ++i) {
    batch.ids.push_back(label(rng));
    batch.modalities.push_back(i % 2 == 0 ? Modality::kVisible : Modality::kInfrared);
  }
  return batch;
}

}  // namespace

std::vector<GradcheckResult> gradcheck_suite(std::uint64_t seed, std::size_t instances) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Each check draws one instance and returns its error, or nullopt when
  // the instance sits on a kink and finite differences are not an oracle.
  using Check = std::function<std::optional<double>()>;

  const Check rank_check = [&]() -> std::optional<double> {
    std::vector<double> theta(8), upstream(8);
    for (double& v : theta) v = unit(rng);
    for (double& v : upstream) v = normal(rng);
    SoftRankParams params;
    params.epsilon = 0.5;
    const auto analytic = soft_rank_vjp(theta, params, upstream);
    double kink = 0.0;
    const auto numeric = numeric_gradient(
        theta,
        [&] {
          const auto r = soft_rank(theta, params);
          double s = 0.0;
          for (std::size_t j = 0; j < r.size(); ++j) s += upstream[j] * r[j];
          return s;
        },
        1e-5, kink);
    if (kink > kSoftRankTol) return std::nullopt;
    return max_abs_diff(analytic, numeric);
  };

  const Check cmr_check = [&]() -> std::optional<double> {
    auto batch = random_batch(rng, 8, 4, 4);
    const SoftRankParams params;
    const auto analytic = cmr_loss(batch, params).grad;
    double kink = 0.0;
    const auto numeric = numeric_gradient(
        batch.embeddings.data(), [&] { return cmr_loss(batch, params).total; }, 1e-6, kink);
    if (kink > kCmrTol * std::max(max_abs(numeric), kRelativeFloor)) return std::nullopt;
    return max_rel_diff(analytic.data(), numeric);
  };

  const Check id_check = [&]() -> std::optional<double> {
    auto batch = random_batch(rng, 4, 5, 3);
    Matrix w(3, 5);
    for (double& x : w.data()) x = normal(rng);
    const auto analytic = id_loss(batch.embeddings, w, batch.ids);
    double kink_e = 0.0, kink_w = 0.0;
    const auto ne = numeric_gradient(
        batch.embeddings.data(), [&] { return id_loss(batch.embeddings, w, batch.ids).loss; },
        1e-5, kink_e);
    const auto nw = numeric_gradient(
        w.data(), [&] { return id_loss(batch.embeddings, w, batch.ids).loss; }, 1e-5, kink_w);
    return std::max(max_abs_diff(analytic.grad_embeddings.data(), ne),
                    max_abs_diff(analytic.grad_classifier.data(), nw));
  };

  const Check total_check = [&]() -> std::optional<double> {
    auto batch = random_batch(rng, 8, 4, 4);
    Matrix w(4, 4);
    for (double& x : w.data()) x = normal(rng);
    const SoftRankParams params;
    const auto analytic = total_loss(batch, w, params).grad;
    double kink = 0.0;
    const auto numeric = numeric_gradient(
        batch.embeddings.data(), [&] { return total_loss(batch, w, params).total; }, 1e-6, kink);
    if (kink > kTotalTol * std::max(max_abs(numeric), kRelativeFloor)) return std::nullopt;
    return max_rel_diff(analytic.data(), numeric);
  };

  std::vector<GradcheckResult> out{
      {"soft_rank_vjp", 0, 0, 0.0, kSoftRankTol, false, false},
      {"cmr_loss", 0, 0, 0.0, kCmrTol, true, false},
      {"id_loss", 0, 0, 0.0, kIdTol, false, false},
      {"total_loss", 0, 0, 0.0, kTotalTol, true, false},
  };
  const Check* checks[] = {&rank_check, &cmr_check, &id_check, &total_check};

  for (std::size_t t = 0; t < instances; ++t) {
    for (std::size_t s = 0; s < out.size(); ++s) {
      for (std::size_t attempt = 0; attempt < kMaxRedraws; ++attempt) {
        const auto err = (*checks[s])();
        if (!err) {
          ++out[s].redrawn;
          continue;
        }
        ++out[s].instances;
        out[s].max_error = std::max(out[s].max_error, *err);
        break;
      }
    }
  }
  for (auto& r : out) r.passed = r.instances == instances && r.max_error < r.tolerance;
  return out;
}

}  // namespace xmodal
