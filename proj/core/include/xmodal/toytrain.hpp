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
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xmodal/cmrloss.hpp"
#include "xmodal/diffrank.hpp"
#include "xmodal/image.hpp"
#include "xmodal/imgproc.hpp"
#include "xmodal/matrix.hpp"
#include "xmodal/metrics.hpp"
#include "xmodal/types.hpp"

namespace xmodal {

/// Raised when training produces a non-finite loss.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Desk-scale two-modality data: identity clusters shifted by a per-modality
/// offset.
struct SyntheticSpec {
  std::size_t n_identities = 32;
  std::size_t samples_per_identity_per_modality = 8;
  std::size_t input_dim = 16;
  double cluster_spread = 0.5;
  double modality_offset_scale = 2.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Image-mode variant: each identity is a 3 x size x size colour pattern.
/// Visible samples are noisy copies; infrared samples are a fixed
/// single-channel mix of the pattern, replicated into three planes.
struct SyntheticImageSpec {
  std::size_t n_identities = 32;
  std::size_t samples_per_identity_per_modality = 8;
  std::size_t size = 8;
  double noise = 0.05;
  std::uint64_t seed = 0;
};

struct Dataset {
  Matrix inputs;  // one flattened sample per row
  std::vector<std::int64_t> ids;
  std::vector<Modality> modalities;
  RetrievalManifest manifest;
  /// Image mode only: row i of inputs is images[i] flattened.
  std::vector<Image> images;

  std::size_t size() const { return inputs.rows(); }
  Dataset subset(std::span<const std::size_t> indices) const;
};

Dataset generate_synthetic(const SyntheticSpec& spec, Rng& rng);
Dataset generate_synthetic_images(const SyntheticImageSpec& spec, Rng& rng);

/// Identity-disjoint split; the last `holdout_fraction` of identities (in
/// ascending id order) form the second set.
std::pair<Dataset, Dataset> split_by_identity(const Dataset& data, double holdout_fraction);

/// P identities without replacement, then K/2 visible and K/2 infrared
/// samples of each without replacement.
std::vector<std::size_t> pk_sample(const Dataset& data, std::size_t p, std::size_t k, Rng& rng);

/// Linear embedder with a batch-norm neck and a linear identity classifier.
struct TinyModel {
  Matrix projection;  // out_dim x in_dim
  std::vector<double> bn_scale;
  std::vector<double> bn_shift;
  std::vector<double> bn_running_mean;
  std::vector<double> bn_running_var;
  Matrix classifier;  // classes x out_dim

  static constexpr double kBnEpsilon = 1e-5;
  static constexpr double kBnMomentum = 0.1;

  std::size_t in_dim() const { return projection.cols(); }
  std::size_t out_dim() const { return projection.rows(); }

  /// Gaussian projection and classifier (std 1e-3). The BN neck makes the
  /// embedding invariant to the projection's scale, so a small projection_std
  /// only changes how far each Adam step moves it relative to its size.
  static TinyModel random(std::size_t in_dim, std::size_t out_dim, std::size_t classes,
                          Rng& rng, double projection_std = 0.01);
  /// Identity projection, unit BN, zero classifier.
  static TinyModel identity(std::size_t dim, std::size_t classes);

  friend bool operator==(const TinyModel&, const TinyModel&) = default;
};

enum class ForwardMode { kTrain, kEval };

struct ForwardResult {
  Matrix pre_bn;
  Matrix post_bn;
  Matrix logits;
  // Train-mode batch statistics, kept for the backward pass and running stats.
  std::vector<double> batch_mean;
  std::vector<double> batch_var;  // biased
};

ForwardResult forward(const TinyModel& model, const Matrix& inputs, ForwardMode mode);

struct ModelGrad {
  Matrix projection;
  std::vector<double> bn_scale;
  std::vector<double> bn_shift;
};

/// Backpropagates d(loss)/d(post-BN embeddings) of a train-mode forward.
ModelGrad backward(const TinyModel& model, const Matrix& inputs, const ForwardResult& fwd,
                   const Matrix& grad_post_bn);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 5e-4;
};

struct TrainConfig {
  std::size_t p = 8;
  std::size_t k = 8;
  std::size_t epochs = 30;
  double learning_rate = 3.5e-4;
  AdamConfig adam;
  SoftRankParams softrank;
  bool use_id_loss = true;
  bool use_cmr_loss = true;
  /// Image-mode datasets only: augment visible samples in the loop.
  std::optional<MaaConfig> maa;
  std::uint64_t seed = 0;

  void validate() const;
};

struct StepLog {
  std::size_t epoch = 0;
  std::size_t step = 0;
  double total = 0.0;
  double id_component = 0.0;
  double cmr_component = 0.0;
};

struct TrainResult {
  TinyModel model;
  std::vector<StepLog> log;
};

/// Steps per epoch: ceil(samples / (P*K)).
std::size_t steps_per_epoch(const Dataset& data, const TrainConfig& cfg);

/// Trains with Adam on id_loss + cmr_loss. Labels are remapped to
/// contiguous class indices of the training identities. Throws
/// DivergenceError on a non-finite loss.
TrainResult train(const Dataset& data, TinyModel model, const TrainConfig& cfg,
                  const std::function<void(const StepLog&)>& on_step = {});

/// Eval-mode post-BN embeddings of every sample.
Matrix embed(const TinyModel& model, const Dataset& data);

/// Infrared queries against the visible gallery, camera filter off.
MetricsReport evaluate_cross_modal(const Matrix& embeddings, const Dataset& data);

/// Mean hard-rank footrule with every sample querying the other modality.
double mean_hard_footrule(const Matrix& embeddings, const Dataset& data);

/// Number of classes the classifier needs for this training set.
std::size_t count_identities(const Dataset& data);

/// End-to-end toy experiment: generate data, split off held-out identities,
/// measure the untrained baselines, train, and measure again.
struct ToyRunConfig {
  SyntheticSpec data;
  bool image_mode = false;
  SyntheticImageSpec image_data;
  TrainConfig train;
  std::size_t embed_dim = 16;
  double holdout_fraction = 0.25;
};

struct ToyRunResult {
  Dataset train_set;
  Dataset heldout;
  MetricsReport raw_metrics;        // cosine retrieval on raw inputs
  MetricsReport untrained_metrics;  // initial model
  MetricsReport trained_metrics;
  double untrained_footrule = 0.0;
  double trained_footrule = 0.0;
  Matrix heldout_embeddings;  // trained model, eval mode
  TrainResult training;
};

/// The data seed comes from cfg.data (or cfg.image_data); the model
/// initialisation and the training loop are seeded from cfg.train.seed.
ToyRunResult run_toy(const ToyRunConfig& cfg,
                     const std::function<void(const StepLog&)>& on_step = {});

struct GradcheckResult {
  std::string name;
  std::size_t instances = 0;  // instances actually compared
  std::size_t redrawn = 0;    // draws discarded as non-differentiable
  double max_error = 0.0;
  double tolerance = 0.0;
  bool relative = false;
  bool passed = false;
};

/// Central finite-difference checks of soft_rank_vjp, cmr_loss, id_loss and
/// total_loss on randomised instances. A draw whose forward and backward
/// one-sided differences disagree lies on a kink of the piecewise-smooth
/// loss; it is redrawn, never compared, and counted in `redrawn`.
std::vector<GradcheckResult> gradcheck_suite(std::uint64_t seed, std::size_t instances = 100);

}  // namespace xmodal
