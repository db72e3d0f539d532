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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace xmodal {

/// Regularisation of the soft-rank operator. The operator ranks
/// theta * input_scale / epsilon, so only the ratio matters; the two are kept
/// separate so that input_scale can track the vector length.
struct SoftRankParams {
  double epsilon = 1.0;
  /// When unset, resolves to 2n for an input of length n, which suits
  /// distances in [0,1].
  std::optional<double> input_scale;

  double resolved_scale(std::size_t n) const;
  void validate() const;
};

/// L2 isotonic regression onto nondecreasing sequences by pool adjacent
/// violators. Throws std::invalid_argument on empty or non-finite input.
std::vector<double> isotonic_regression_l2(std::span<const double> y);

/// Ascending soft ranks: Euclidean projection of the scaled input onto the
/// permutahedron of (1, ..., n). The smallest input tends to rank 1.
///
/// The forward pass keeps its sort permutation and PAV pools so that any
/// number of vector-Jacobian products can be taken without recomputation.
/// The Jacobian is piecewise constant; at ties or pool boundaries vjp()
/// returns the generalised gradient of the pools found by the forward pass.
class SoftRank {
 public:
  SoftRank(std::span<const double> theta, const SoftRankParams& params);

  const std::vector<double>& ranks() const { return ranks_; }
  std::size_t size() const { return ranks_.size(); }

  /// upstream^T * d(ranks)/d(theta).
  std::vector<double> vjp(std::span<const double> upstream) const;

 private:
  double scale_ = 1.0;
  std::vector<double> ranks_;
  std::vector<std::size_t> order_;       // ascending sort of the scaled input
  std::vector<std::size_t> pool_ends_;   // exclusive ends of PAV pools, sorted space
};

std::vector<double> soft_rank(std::span<const double> theta, const SoftRankParams& params);

std::vector<double> soft_rank_vjp(std::span<const double> theta, const SoftRankParams& params,
                                  std::span<const double> upstream);

/// Dense Jacobian d(ranks)/d(theta), row-major n x n. Row i is the vjp of
/// the unit vector e_i.
std::vector<double> soft_rank_jacobian(std::span<const double> theta,
                                       const SoftRankParams& params);

/// Ascending permutation ranks 1..n; ties keep input order.
std::vector<double> hard_rank(std::span<const double> theta);

}  // namespace xmodal
