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

#include "xmodal/diffrank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace xmodal {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  if (v.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty input");
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string(what) + ": non-finite input");
    }
  }
}

struct Pool {
  double sum;
  std::size_t count;
  std::size_t end;  // exclusive
  double mean() const { return sum / static_cast<double>(count); }
};

// Pool adjacent violators for nondecreasing fits. Each pool's value is the
// mean of the entries it covers; pools are merged only on strict violation.
std::vector<Pool> pav_pools(std::span<const double> y) {
  std::vector<Pool> pools;
  pools.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    pools.push_back({y[i], 1, i + 1});
    while (pools.size() > 1 && pools[pools.size() - 2].mean() > pools.back().mean()) {
      Pool top = pools.back();
      pools.pop_back();
      pools.back().sum += top.sum;
      pools.back().count += top.count;
      pools.back().end = top.end;
    }
  }
  return pools;
}

std::vector<std::size_t> stable_argsort(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return order;
}

}  // namespace

double SoftRankParams::resolved_scale(std::size_t n) const {
  return input_scale ? *input_scale : 2.0 * static_cast<double>(n);
}

void SoftRankParams::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("soft rank epsilon must be finite and > 0");
  }
  if (input_scale && (!(*input_scale > 0.0) || !std::isfinite(*input_scale))) {
    throw std::invalid_argument("soft rank input_scale must be finite and > 0");
  }
}

std::vector<double> isotonic_regression_l2(std::span<const double> y) {
  require_finite(y, "isotonic_regression_l2");
  std::vector<double> out(y.size());
  std::size_t begin = 0;
  for (const Pool& p : pav_pools(y)) {
    std::fill(out.begin() + begin, out.begin() + p.end, p.mean());
    begin = p.end;
  }
  return out;
}

SoftRank::SoftRank(std::span<const double> theta, const SoftRankParams& params) {
  require_finite(theta, "soft_rank");
  params.validate();
  const std::size_t n = theta.size();
  scale_ = params.resolved_scale(n) / params.epsilon;

  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = theta[i] * scale_;
  order_ = stable_argsort(z);

  // Projection onto the permutahedron of (1..n) reduces to an isotonic fit of
  // sorted(z) - (1..n); the ranks are sorted(z) minus that fit.
  std::vector<double> sorted(n), residual(n);
  for (std::size_t k = 0; k < n; ++k) {
    sorted[k] = z[order_[k]];
    residual[k] = sorted[k] - static_cast<double>(k + 1);
  }
  const auto pools = pav_pools(residual);

  ranks_.assign(n, 0.0);
  pool_ends_.clear();
  pool_ends_.reserve(pools.size());
  std::size_t begin = 0;
  for (const Pool& p : pools) {
    const double fit = p.mean();
    for (std::size_t k = begin; k < p.end; ++k) {
      ranks_[order_[k]] = std::clamp(sorted[k] - fit, 1.0, static_cast<double>(n));
    }
    pool_ends_.push_back(p.end);
    begin = p.end;
  }
}

std::vector<double> SoftRank::vjp(std::span<const double> upstream) const {
  const std::size_t n = ranks_.size();
  if (upstream.size() != n) {
    throw std::invalid_argument("soft_rank_vjp: upstream length mismatch");
  }
  // Sorted-space Jacobian is I - (pool averaging), so the product subtracts
  // each pool's mean upstream value.
  std::vector<double> out(n, 0.0);
  std::size_t begin = 0;
  for (std::size_t end : pool_ends_) {
    double mean = 0.0;
    for (std::size_t k = begin; k < end; ++k) mean += upstream[order_[k]];
    mean /= static_cast<double>(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
      out[order_[k]] = scale_ * (upstream[order_[k]] - mean);
    }
    begin = end;
  }
  return out;
}

std::vector<double> soft_rank(std::span<const double> theta, const SoftRankParams& params) {
  return SoftRank(theta, params).ranks();
}

std::vector<double> soft_rank_vjp(std::span<const double> theta, const SoftRankParams& params,
                                  std::span<const double> upstream) {
  return SoftRank(theta, params).vjp(upstream);
}

std::vector<double> soft_rank_jacobian(std::span<const double> theta,
                                       const SoftRankParams& params) {
  const SoftRank op(theta, params);
  const std::size_t n = op.size();
  std::vector<double> jac(n * n, 0.0);
  std::vector<double> unit(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    unit[i] = 1.0;
    const auto row = op.vjp(unit);
    std::copy(row.begin(), row.end(), jac.begin() + i * n);
    unit[i] = 0.0;
  }
  return jac;
}

std::vector<double> hard_rank(std::span<const double> theta) {
  require_finite(theta, "hard_rank");
  const auto order = stable_argsort(theta);
  std::vector<double> ranks(theta.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    ranks[order[k]] = static_cast<double>(k + 1);
  }
  return ranks;
}

}  // namespace xmodal
