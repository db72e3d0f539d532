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

#include "xmodal/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xmodal {

Plane Image::extract(Channel c) const {
  Plane out(height_, width_);
  auto src = plane(c);
  std::copy(src.begin(), src.end(), out.values().begin());
  return out;
}

void Image::validate() const {
  for (double v : data_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("image intensity outside [0,1]");
    }
  }
}

bool Image::planes_identical() const {
  auto r = plane(Channel::kRed);
  auto g = plane(Channel::kGreen);
  auto b = plane(Channel::kBlue);
  return std::equal(r.begin(), r.end(), g.begin()) &&
         std::equal(r.begin(), r.end(), b.begin());
}

std::string_view to_string(MaaStrategy s) {
  switch (s) {
    case MaaStrategy::kWeightedGrayscale:
      return "wg";
    case MaaStrategy::kCrossChannelCutmix:
      return "cc";
    case MaaStrategy::kSpectrumJitter:
      return "sj";
  }
  return "?";
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::kRed:
      return "r";
    case Channel::kGreen:
      return "g";
    case Channel::kBlue:
      return "b";
  }
  return "?";
}

void Simplex3Weights::validate() const {
  for (double a : {a1, a2, a3}) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw std::invalid_argument("simplex weight outside [0,1]");
    }
  }
  if (std::abs(a1 + a2 + a3 - 1.0) > 1e-9) {
    throw std::invalid_argument("simplex weights must sum to 1");
  }
}

void MaaConfig::validate() const {
  if (!(apply_probability >= 0.0 && apply_probability <= 1.0)) {
    throw std::invalid_argument("apply_probability must lie in [0,1]");
  }
  double sum = 0.0;
  for (double w : strategy_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("strategy weights must be finite and nonnegative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) {
    throw std::invalid_argument("strategy weights must not all be zero");
  }
}

namespace {

// Writes one plane's worth of values into all three output planes.
template <typename F>
Image replicate_plane(const Image& img, F&& value_at) {
  Image out(img.height(), img.width());
  auto r = out.plane(Channel::kRed);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = value_at(i);
  std::copy(r.begin(), r.end(), out.plane(Channel::kGreen).begin());
  std::copy(r.begin(), r.end(), out.plane(Channel::kBlue).begin());
  return out;
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace

Image weighted_grayscale(const Image& img, const Simplex3Weights& w) {
  w.validate();
  auto r = img.plane(Channel::kRed);
  auto g = img.plane(Channel::kGreen);
  auto b = img.plane(Channel::kBlue);
  return replicate_plane(img, [&](std::size_t i) {
    // Convex combination; clamp absorbs last-ulp rounding above 1.
    return std::clamp(w.a1 * r[i] + w.a2 * g[i] + w.a3 * b[i], 0.0, 1.0);
  });
}

Simplex3Weights sample_simplex3(Rng& rng) {
  double u = uniform01(rng);
  double v = uniform01(rng);
  if (u > v) std::swap(u, v);
  return {u, v - u, 1.0 - v};
}

Image cross_channel_cutmix(const Image& img, Channel background, Channel foreground,
                           const PatchRect& rect) {
  if (background == foreground) {
    throw std::invalid_argument("cutmix background and foreground channels must differ");
  }
  if (rect.top + rect.height > img.height() || rect.left + rect.width > img.width()) {
    throw std::invalid_argument("cutmix patch exceeds image bounds");
  }
  auto bg = img.plane(background);
  auto fg = img.plane(foreground);
  const std::size_t width = img.width();
  return replicate_plane(img, [&](std::size_t i) {
    return rect.contains(i / width, i % width) ? fg[i] : bg[i];
  });
}

CutmixPatchDraw cutmix_patch_from(double lambda, std::size_t center_y, std::size_t center_x,
                                  std::size_t height, std::size_t width) {
  CutmixPatchDraw draw;
  draw.lambda = lambda;
  draw.center_y = center_y;
  draw.center_x = center_x;
  const double side = std::sqrt(std::max(0.0, 1.0 - lambda));
  draw.unclipped_height = static_cast<std::size_t>(std::lround(height * side));
  draw.unclipped_width = static_cast<std::size_t>(std::lround(width * side));

  auto clip_span = [](std::size_t center, std::size_t extent, std::size_t limit) {
    const auto lo = static_cast<long long>(center) - static_cast<long long>(extent / 2);
    const auto hi = lo + static_cast<long long>(extent);
    const auto lim = static_cast<long long>(limit);
    const auto a = std::clamp(lo, 0LL, lim);
    const auto b = std::clamp(hi, 0LL, lim);
    return std::pair<std::size_t, std::size_t>(a, b - a);
  };
  auto [top, h] = clip_span(center_y, draw.unclipped_height, height);
  auto [left, w] = clip_span(center_x, draw.unclipped_width, width);
  draw.rect = {top, left, h, w};
  return draw;
}

CutmixPatchDraw draw_cutmix_patch(Rng& rng, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) {
    throw std::invalid_argument("cutmix patch requires a non-empty image");
  }
  const double lambda = uniform01(rng);
  const auto cy = std::uniform_int_distribution<std::size_t>(0, height - 1)(rng);
  const auto cx = std::uniform_int_distribution<std::size_t>(0, width - 1)(rng);
  return cutmix_patch_from(lambda, cy, cx, height, width);
}

PatchRect sample_cutmix_patch(Rng& rng, std::size_t height, std::size_t width) {
  return draw_cutmix_patch(rng, height, width).rect;
}

Image spectrum_jitter(const Image& img, Channel ch, double beta1) {
  if (!(beta1 >= 0.0 && beta1 <= 1.0)) {
    throw std::invalid_argument("spectrum jitter beta1 must lie in [0,1]");
  }
  const double beta2 = 1.0 - beta1;
  Image out(img.height(), img.width());
  auto degenerate = img.plane(ch);
  for (Channel c : kAllChannels) {
    auto src = img.plane(c);
    auto dst = out.plane(c);
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = std::clamp(beta1 * src[i] + beta2 * degenerate[i], 0.0, 1.0);
    }
  }
  return out;
}

Image apply_maa(const Image& img, Rng& rng, const MaaConfig& cfg, MaaRecord* record) {
  cfg.validate();
  MaaRecord local;
  MaaRecord& rec = record ? *record : local;
  rec = MaaRecord{};

  if (uniform01(rng) >= cfg.apply_probability) {
    return img;
  }
  rec.applied = true;
  std::discrete_distribution<int> pick(cfg.strategy_weights.begin(),
                                       cfg.strategy_weights.end());
  rec.strategy = static_cast<MaaStrategy>(pick(rng));

  switch (rec.strategy) {
    case MaaStrategy::kWeightedGrayscale:
      rec.weights = sample_simplex3(rng);
      return weighted_grayscale(img, rec.weights);
    case MaaStrategy::kCrossChannelCutmix: {
      const int bg = std::uniform_int_distribution<int>(0, 2)(rng);
      const int offset = std::uniform_int_distribution<int>(1, 2)(rng);
      rec.background = static_cast<Channel>(bg);
      rec.foreground = static_cast<Channel>((bg + offset) % 3);
      rec.rect = sample_cutmix_patch(rng, img.height(), img.width());
      return cross_channel_cutmix(img, rec.background, rec.foreground, rec.rect);
    }
    case MaaStrategy::kSpectrumJitter:
      rec.jitter_channel = static_cast<Channel>(std::uniform_int_distribution<int>(0, 2)(rng));
      rec.beta1 = uniform01(rng);
      return spectrum_jitter(img, rec.jitter_channel, rec.beta1);
  }
  return img;
}

Image expand_infrared(const Plane& plane) {
  Image out(plane.height(), plane.width());
  for (Channel c : kAllChannels) {
    std::copy(plane.values().begin(), plane.values().end(), out.plane(c).begin());
  }
  return out;
}

}  // namespace xmodal
