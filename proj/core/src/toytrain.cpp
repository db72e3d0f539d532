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

#include "xmodal/toytrain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace xmodal {

namespace {

double normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

std::vector<std::int64_t> sorted_unique_ids(const std::vector<std::int64_t>& ids) {
  std::set<std::int64_t> s(ids.begin(), ids.end());
  return {s.begin(), s.end()};
}

void push_record(Dataset& d, std::int64_t id, Modality m, std::size_t s) {
  d.ids.push_back(id);
  d.modalities.push_back(m);
  const bool vis = m == Modality::kVisible;
  d.manifest.records.push_back({"p" + std::to_string(id) + "_" + std::string(to_string(m)) +
                                    "_" + std::to_string(s),
                                id, static_cast<std::int64_t>((vis ? 0 : 2) + s % 2), m});
}

void flatten_into(const Image& img, std::span<double> row) {
  const auto v = img.values();
  std::copy(v.begin(), v.end(), row.begin());
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n_identities < 1 || samples_per_identity_per_modality < 1 || input_dim < 1) {
    throw std::invalid_argument("synthetic spec: counts must be >= 1");
  }
  if (!(cluster_spread >= 0.0) || !(modality_offset_scale >= 0.0)) {
    throw std::invalid_argument("synthetic spec: spreads must be >= 0");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.inputs = inputs.select_rows(indices);
  out.manifest = manifest.subset(indices);
  for (std::size_t i : indices) {
    out.ids.push_back(ids[i]);
    out.modalities.push_back(modalities[i]);
    if (!images.empty()) out.images.push_back(images[i]);
  }
  return out;
}

Dataset generate_synthetic(const SyntheticSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t dim = spec.input_dim;
  const std::size_t per = spec.samples_per_identity_per_modality;

  std::vector<double> offsets[2];
  for (auto& off : offsets) {
    off.resize(dim);
    for (double& x : off) x = spec.modality_offset_scale * normal(rng);
  }

  Dataset d;
  d.inputs = Matrix(spec.n_identities * per * 2, dim);
  std::size_t row = 0;
  std::vector<double> center(dim);
  for (std::size_t p = 0; p < spec.n_identities; ++p) {
    for (double& c : center) c = normal(rng);
    for (Modality m : {Modality::kVisible, Modality::kInfrared}) {
      const auto& off = offsets[static_cast<int>(m)];
      for (std::size_t s = 0; s < per; ++s, ++row) {
        auto x = d.inputs.row(row);
        for (std::size_t k = 0; k < dim; ++k) {
          x[k] = center[k] + off[k] + spec.cluster_spread * normal(rng);
        }
        push_record(d, static_cast<std::int64_t>(p), m, s);
      }
    }
  }
  return d;
}

Dataset generate_synthetic_images(const SyntheticImageSpec& spec, Rng& rng) {
  if (spec.n_identities < 1 || spec.samples_per_identity_per_modality < 1 || spec.size < 1) {
    throw std::invalid_argument("synthetic image spec: counts must be >= 1");
  }
  // Fixed spectral response of the simulated infrared sensor.
  constexpr double kIrMix[3] = {0.5, 0.3, 0.2};
  const std::size_t per = spec.samples_per_identity_per_modality;
  const std::size_t n = spec.n_identities * per * 2;
  auto noisy = [&](double v) { return std::clamp(v + spec.noise * normal(rng), 0.0, 1.0); };

  Dataset d;
  d.inputs = Matrix(n, Image::kChannels * spec.size * spec.size);
  std::size_t row = 0;
  for (std::size_t p = 0; p < spec.n_identities; ++p) {
    Image pattern(spec.size, spec.size);
    for (double& v : pattern.values()) {
      v = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    for (std::size_t s = 0; s < per; ++s, ++row) {
      Image img(spec.size, spec.size);
      for (std::size_t i = 0; i < img.values().size(); ++i) {
        img.values()[i] = noisy(pattern.values()[i]);
      }
      flatten_into(img, d.inputs.row(row));
      d.images.push_back(std::move(img));
      push_record(d, static_cast<std::int64_t>(p), Modality::kVisible, s);
    }
    for (std::size_t s = 0; s < per; ++s, ++row) {
      Plane ir(spec.size, spec.size);
      for (std::size_t i = 0; i < ir.values().size(); ++i) {
        double v = 0.0;
        for (Channel c : kAllChannels) {
          v += kIrMix[static_cast<int>(c)] * pattern.plane(c)[i];
        }
        ir.values()[i] = noisy(v);
      }
      Image img = expand_infrared(ir);
      flatten_into(img, d.inputs.row(row));
      d.images.push_back(std::move(img));
      push_record(d, static_cast<std::int64_t>(p), Modality::kInfrared, s);
    }
  }
  return d;
}

std::pair<Dataset, Dataset> split_by_identity(const Dataset& data, double holdout_fraction) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw std::invalid_argument("holdout fraction must lie in (0,1)");
  }
  const auto ids = sorted_unique_ids(data.ids);
  auto n_hold = static_cast<std::size_t>(std::lround(holdout_fraction * ids.size()));
  n_hold = std::clamp<std::size_t>(n_hold, 1, ids.size() > 1 ? ids.size() - 1 : 1);
  const std::set<std::int64_t> held(ids.end() - static_cast<std::ptrdiff_t>(n_hold), ids.end());

  std::vector<std::size_t> train_idx, hold_idx;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (held.count(data.ids[i]) ? hold_idx : train_idx).push_back(i);
  }
  return {data.subset(train_idx), data.subset(hold_idx)};
}

std::vector<std::size_t> pk_sample(const Dataset& data, std::size_t p, std::size_t k, Rng& rng) {
  if (p < 1 || k < 2 || k % 2 != 0) {
    throw std::invalid_argument("pk_sample: need P >= 1 and even K >= 2");
  }
  std::map<std::int64_t, std::array<std::vector<std::size_t>, 2>> pools;
  for (std::size_t i = 0; i < data.size(); ++i) {
    pools[data.ids[i]][static_cast<int>(data.modalities[i])].push_back(i);
  }
  if (pools.size() < p) {
    throw std::invalid_argument("pk_sample: P = " + std::to_string(p) + " exceeds the " +
                                std::to_string(pools.size()) + " identities available");
  }
  std::vector<std::int64_t> ids;
  for (const auto& entry : pools) ids.push_back(entry.first);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(p);

  const std::size_t half = k / 2;
  std::vector<std::size_t> batch;
  batch.reserve(p * k);
  for (std::int64_t id : ids) {
    for (int m = 0; m < 2; ++m) {
      auto candidates = pools[id][m];
      if (candidates.size() < half) {
        throw std::invalid_argument("pk_sample: identity " + std::to_string(id) + " has only " +
                                    std::to_string(candidates.size()) + " " +
                                    std::string(to_string(static_cast<Modality>(m))) +
                                    " samples, need " + std::to_string(half));
      }
      std::shuffle(candidates.begin(), candidates.end(), rng);
      batch.insert(batch.end(), candidates.begin(), candidates.begin() + half);
    }
  }
  return batch;
}

TinyModel TinyModel::random(std::size_t in_dim, std::size_t out_dim, std::size_t classes,
                            Rng& rng, double projection_std) {
  TinyModel m = identity(1, classes);
  m.projection = Matrix(out_dim, in_dim);
  for (double& w : m.projection.data()) w = projection_std * normal(rng);
  m.bn_scale.assign(out_dim, 1.0);
  m.bn_shift.assign(out_dim, 0.0);
  m.bn_running_mean.assign(out_dim, 0.0);
  m.bn_running_var.assign(out_dim, 1.0);
  m.classifier = Matrix(classes, out_dim);
  for (double& w : m.classifier.data()) w = 1e-3 * normal(rng);
  return m;
}

TinyModel TinyModel::identity(std::size_t dim, std::size_t classes) {
  TinyModel m;
  m.projection = Matrix(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m.projection(i, i) = 1.0;
  m.bn_scale.assign(dim, 1.0);
  m.bn_shift.assign(dim, 0.0);
  m.bn_running_mean.assign(dim, 0.0);
  m.bn_running_var.assign(dim, 1.0);
  m.classifier = Matrix(classes, dim);
  return m;
}

ForwardResult forward(const TinyModel& model, const Matrix& inputs, ForwardMode mode) {
  if (inputs.cols() != model.in_dim()) {
    throw std::invalid_argument("forward: input dimension " + std::to_string(inputs.cols()) +
                                " does not match model input " +
                                std::to_string(model.in_dim()));
  }
  const std::size_t b = inputs.rows();
  const std::size_t out = model.out_dim();
  if (mode == ForwardMode::kTrain && b == 0) {
    throw std::invalid_argument("forward: empty train batch");
  }
  ForwardResult r;
  r.pre_bn = Matrix(b, out);
  for (std::size_t i = 0; i < b; ++i) {
    const auto x = inputs.row(i);
    for (std::size_t o = 0; o < out; ++o) {
      const auto w = model.projection.row(o);
      double s = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * w[k];
      r.pre_bn(i, o) = s;
    }
  }

  std::vector<double> mean = model.bn_running_mean;
  std::vector<double> var = model.bn_running_var;
  if (mode == ForwardMode::kTrain) {
    mean.assign(out, 0.0);
    var.assign(out, 0.0);
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t o = 0; o < out; ++o) mean[o] += r.pre_bn(i, o);
    }
    for (double& m : mean) m /= static_cast<double>(b);
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t o = 0; o < out; ++o) {
        const double c = r.pre_bn(i, o) - mean[o];
        var[o] += c * c;
      }
    }
    for (double& v : var) v /= static_cast<double>(b);
    r.batch_mean = mean;
    r.batch_var = var;
  }

  r.post_bn = Matrix(b, out);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t o = 0; o < out; ++o) {
      const double xhat = (r.pre_bn(i, o) - mean[o]) / std::sqrt(var[o] + TinyModel::kBnEpsilon);
      r.post_bn(i, o) = model.bn_scale[o] * xhat + model.bn_shift[o];
    }
  }

  const std::size_t classes = model.classifier.rows();
  r.logits = Matrix(b, classes);
  for (std::size_t i = 0; i < b; ++i) {
    const auto e = r.post_bn.row(i);
    for (std::size_t c = 0; c < classes; ++c) {
      const auto w = model.classifier.row(c);
      double s = 0.0;
      for (std::size_t k = 0; k < out; ++k) s += e[k] * w[k];
      r.logits(i, c) = s;
    }
  }
  return r;
}

ModelGrad backward(const TinyModel& model, const Matrix& inputs, const ForwardResult& fwd,
                   const Matrix& grad_post_bn) {
  const std::size_t b = inputs.rows();
  const std::size_t out = model.out_dim();
  if (fwd.batch_mean.size() != out) {
    throw std::invalid_argument("backward: requires a train-mode forward pass");
  }
  ModelGrad g{Matrix(out, model.in_dim()), std::vector<double>(out, 0.0),
              std::vector<double>(out, 0.0)};
  Matrix grad_pre(b, out);
  const double nb = static_cast<double>(b);
  for (std::size_t o = 0; o < out; ++o) {
    const double inv_std = 1.0 / std::sqrt(fwd.batch_var[o] + TinyModel::kBnEpsilon);
    double sum_dxhat = 0.0;
    double sum_dxhat_xhat = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
      const double xhat = (fwd.pre_bn(i, o) - fwd.batch_mean[o]) * inv_std;
      const double dy = grad_post_bn(i, o);
      g.bn_shift[o] += dy;
      g.bn_scale[o] += dy * xhat;
      const double dxhat = dy * model.bn_scale[o];
      sum_dxhat += dxhat;
      sum_dxhat_xhat += dxhat * xhat;
    }
    for (std::size_t i = 0; i < b; ++i) {
      const double xhat = (fwd.pre_bn(i, o) - fwd.batch_mean[o]) * inv_std;
      const double dxhat = grad_post_bn(i, o) * model.bn_scale[o];
      grad_pre(i, o) = inv_std / nb * (nb * dxhat - sum_dxhat - xhat * sum_dxhat_xhat);
    }
  }
  for (std::size_t o = 0; o < out; ++o) {
    auto gw = g.projection.row(o);
    for (std::size_t i = 0; i < b; ++i) {
      const double d = grad_pre(i, o);
      const auto x = inputs.row(i);
      for (std::size_t k = 0; k < gw.size(); ++k) gw[k] += d * x[k];
    }
  }
  return g;
}

void TrainConfig::validate() const {
  if (p < 2) throw std::invalid_argument("train config: P must be >= 2");
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("train config: K must be even and >= 2");
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("train config: learning rate < 0");
  if (!use_id_loss && !use_cmr_loss) {
    throw std::invalid_argument("train config: at least one loss must be enabled");
  }
  softrank.validate();
  if (maa) maa->validate();
}

std::size_t count_identities(const Dataset& data) { return sorted_unique_ids(data.ids).size(); }

std::size_t steps_per_epoch(const Dataset& data, const TrainConfig& cfg) {
  const std::size_t batch = cfg.p * cfg.k;
  return std::max<std::size_t>(1, (data.size() + batch - 1) / batch);
}

namespace {

// Adam moments for one flat parameter block.
struct AdamSlot {
  std::vector<double> m;
  std::vector<double> v;

  void step(std::span<double> param, std::span<const double> grad, const AdamConfig& cfg,
            double lr, std::size_t t) {
    if (m.empty()) {
      m.assign(param.size(), 0.0);
      v.assign(param.size(), 0.0);
    }
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < param.size(); ++i) {
      const double g = grad[i] + cfg.weight_decay * param[i];
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
      param[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + cfg.epsilon);
    }
  }
};

}  // namespace

TrainResult train(const Dataset& data, TinyModel model, const TrainConfig& cfg,
                  const std::function<void(const StepLog&)>& on_step) {
  cfg.validate();
  if (cfg.maa && data.images.size() != data.size()) {
    throw std::invalid_argument("train: augmentation requires an image-mode dataset");
  }
  const auto ids = sorted_unique_ids(data.ids);
  if (model.classifier.rows() != ids.size()) {
    throw std::invalid_argument("train: classifier has " +
                                std::to_string(model.classifier.rows()) + " classes, data has " +
                                std::to_string(ids.size()) + " identities");
  }
  std::map<std::int64_t, std::int64_t> class_of;
  for (std::size_t c = 0; c < ids.size(); ++c) class_of[ids[c]] = static_cast<std::int64_t>(c);

  Rng rng(cfg.seed);
  AdamSlot slot_proj, slot_scale, slot_shift, slot_cls;
  TrainResult result;
  const std::size_t steps = steps_per_epoch(data, cfg);
  std::size_t t = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t s = 0; s < steps; ++s) {
      const auto idx = pk_sample(data, cfg.p, cfg.k, rng);
      Matrix inputs = data.inputs.select_rows(idx);
      if (cfg.maa) {
        for (std::size_t r = 0; r < idx.size(); ++r) {
          if (data.modalities[idx[r]] != Modality::kVisible) continue;
          flatten_into(apply_maa(data.images[idx[r]], rng, *cfg.maa), inputs.row(r));
        }
      }
      const auto fwd = forward(model, inputs, ForwardMode::kTrain);
      const auto where = [&] {
        return " at epoch " + std::to_string(epoch) + " step " + std::to_string(t);
      };
      for (double v : fwd.logits.data()) {
        if (!std::isfinite(v)) throw DivergenceError("train: non-finite activations" + where());
      }
      for (double v : fwd.post_bn.data()) {
        if (!std::isfinite(v)) throw DivergenceError("train: non-finite activations" + where());
      }

      EmbeddingBatch batch{fwd.post_bn, {}, {}};
      for (std::size_t i : idx) {
        batch.ids.push_back(class_of.at(data.ids[i]));
        batch.modalities.push_back(data.modalities[i]);
      }

      LossReport loss;
      if (cfg.use_id_loss && cfg.use_cmr_loss) {
        loss = total_loss(batch, model.classifier, cfg.softrank);
      } else if (cfg.use_cmr_loss) {
        loss = cmr_loss(batch, cfg.softrank);
        loss.classifier_grad = Matrix(model.classifier.rows(), model.classifier.cols());
      } else {
        auto id = id_loss(batch.embeddings, model.classifier, batch.ids);
        loss.id_component = loss.total = id.loss;
        loss.grad = std::move(id.grad_embeddings);
        loss.classifier_grad = std::move(id.grad_classifier);
      }

      StepLog entry{epoch, t, loss.total, loss.id_component, loss.cmr_component};
      if (!std::isfinite(loss.total)) {
        throw DivergenceError("train: non-finite loss" + where() +
                              " (id=" + std::to_string(loss.id_component) +
                              ", cmr=" + std::to_string(loss.cmr_component) + ")");
      }
      result.log.push_back(entry);
      if (on_step) on_step(entry);

      const auto grad = backward(model, inputs, fwd, loss.grad);
      const double nb = static_cast<double>(idx.size());
      for (std::size_t o = 0; o < model.out_dim(); ++o) {
        const double m = TinyModel::kBnMomentum;
        model.bn_running_mean[o] = (1.0 - m) * model.bn_running_mean[o] + m * fwd.batch_mean[o];
        model.bn_running_var[o] = (1.0 - m) * model.bn_running_var[o] +
                                  m * fwd.batch_var[o] * nb / std::max(1.0, nb - 1.0);
      }

      ++t;
      slot_proj.step(model.projection.data(), grad.projection.data(), cfg.adam,
                     cfg.learning_rate, t);
      slot_scale.step(model.bn_scale, grad.bn_scale, cfg.adam, cfg.learning_rate, t);
      slot_shift.step(model.bn_shift, grad.bn_shift, cfg.adam, cfg.learning_rate, t);
      slot_cls.step(model.classifier.data(), loss.classifier_grad.data(), cfg.adam,
                    cfg.learning_rate, t);
    }
  }
  result.model = std::move(model);
  return result;
}

Matrix embed(const TinyModel& model, const Dataset& data) {
  return forward(model, data.inputs, ForwardMode::kEval).post_bn;
}

MetricsReport evaluate_cross_modal(const Matrix& embeddings, const Dataset& data) {
  std::vector<std::size_t> q, g;
  for (std::size_t i = 0; i < data.size(); ++i) {
    (data.modalities[i] == Modality::kInfrared ? q : g).push_back(i);
  }
  const EvalSet query{embeddings.select_rows(q), data.manifest.subset(q)};
  const EvalSet gallery{embeddings.select_rows(g), data.manifest.subset(g)};
  EvalConfig cfg;
  cfg.camera_filter = false;
  return evaluate(query, gallery, cfg);
}

double mean_hard_footrule(const Matrix& embeddings, const Dataset& data) {
  std::vector<std::size_t> members[2];
  for (std::size_t i = 0; i < data.size(); ++i) {
    members[static_cast<int>(data.modalities[i])].push_back(i);
  }
  if (members[0].empty() || members[1].empty()) {
    throw std::invalid_argument("mean_hard_footrule: both modalities required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& gallery_idx = members[static_cast<int>(opposite(data.modalities[i]))];
    const Matrix gallery = embeddings.select_rows(gallery_idx);
    std::vector<std::int64_t> gallery_ids;
    for (std::size_t j : gallery_idx) gallery_ids.push_back(data.ids[j]);
    const auto ranks = hard_rank(cosine_distance_row(embeddings.row(i), gallery));
    total += footrule(ranks, target_ranks(data.ids[i], gallery_ids));
  }
  return total / static_cast<double>(data.size());
}

ToyRunResult run_toy(const ToyRunConfig& cfg,
                     const std::function<void(const StepLog&)>& on_step) {
  Dataset all;
  if (cfg.image_mode) {
    Rng data_rng(cfg.image_data.seed);
    all = generate_synthetic_images(cfg.image_data, data_rng);
  } else {
    Rng data_rng(cfg.data.seed);
    all = generate_synthetic(cfg.data, data_rng);
  }
  ToyRunResult r;
  std::tie(r.train_set, r.heldout) = split_by_identity(all, cfg.holdout_fraction);

  Rng model_rng(cfg.train.seed ^ 0x5DEECE66DULL);
  const TinyModel initial = TinyModel::random(r.train_set.inputs.cols(), cfg.embed_dim,
                                              count_identities(r.train_set), model_rng);
  r.raw_metrics = evaluate_cross_modal(r.heldout.inputs, r.heldout);
  const Matrix before = embed(initial, r.heldout);
  r.untrained_metrics = evaluate_cross_modal(before, r.heldout);
  r.untrained_footrule = mean_hard_footrule(before, r.heldout);

  r.training = train(r.train_set, initial, cfg.train, on_step);
  r.heldout_embeddings = embed(r.training.model, r.heldout);
  r.trained_metrics = evaluate_cross_modal(r.heldout_embeddings, r.heldout);
  r.trained_footrule = mean_hard_footrule(r.heldout_embeddings, r.heldout);
  return r;
}

}  // namespace xmodal
