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

#include <array>
#include <cstddef>
#include <string_view>

#include "xmodal/image.hpp"
#include "xmodal/types.hpp"

namespace xmodal {

/// Convex weights over the (r, g, b) channels.
struct Simplex3Weights {
  double a1 = 1.0 / 3.0;
  double a2 = 1.0 / 3.0;
  double a3 = 1.0 / 3.0;

  /// Throws std::invalid_argument unless each weight is in [0,1] and the
  /// sum is 1 within 1e-9.
  void validate() const;
};

/// Axis-aligned patch [top, top+height) x [left, left+width). Zero area is legal.
struct PatchRect {
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t height = 0;
  std::size_t width = 0;

  bool contains(std::size_t y, std::size_t x) const {
    return y >= top && y < top + height && x >= left && x < left + width;
  }
  std::size_t area() const { return height * width; }
  friend bool operator==(const PatchRect&, const PatchRect&) = default;
};

/// One draw of the cutmix patch law, with the latent variables kept for
/// inspection. rect is the clipped rectangle actually used.
struct CutmixPatchDraw {
  double lambda = 0.0;
  std::size_t center_y = 0;
  std::size_t center_x = 0;
  std::size_t unclipped_height = 0;
  std::size_t unclipped_width = 0;
  PatchRect rect;
};

enum class MaaStrategy : int {
  kWeightedGrayscale = 0,
  kCrossChannelCutmix = 1,
  kSpectrumJitter = 2,
};

std::string_view to_string(MaaStrategy s);
std::string_view to_string(Channel c);

struct MaaConfig {
  double apply_probability = 1.0;
  /// Relative weights over {WG, CC, SJ}.
  std::array<double, 3> strategy_weights = {1.0, 1.0, 1.0};

  void validate() const;
};

/// What apply_maa actually did to one image.
struct MaaRecord {
  bool applied = false;
  MaaStrategy strategy = MaaStrategy::kWeightedGrayscale;
  Simplex3Weights weights;
  Channel background = Channel::kRed;
  Channel foreground = Channel::kGreen;
  PatchRect rect;
  Channel jitter_channel = Channel::kRed;
  double beta1 = 1.0;
};

/// Per-pixel a1*r + a2*g + a3*b, replicated into all three planes.
Image weighted_grayscale(const Image& img, const Simplex3Weights& w);

/// Uniform draw on the 2-simplex (sorted uniform spacings).
Simplex3Weights sample_simplex3(Rng& rng);

/// All three output planes hold the background channel, except inside rect
/// where they hold the foreground channel.
Image cross_channel_cutmix(const Image& img, Channel background, Channel foreground,
                           const PatchRect& rect);

/// Deterministic part of the patch law: side scale sqrt(1 - lambda),
/// rectangle centred at (center_y, center_x), clipped to the image.
CutmixPatchDraw cutmix_patch_from(double lambda, std::size_t center_y,
                                  std::size_t center_x, std::size_t height,
                                  std::size_t width);

/// lambda ~ U(0,1), centre uniform over pixels. Requires height, width >= 1.
CutmixPatchDraw draw_cutmix_patch(Rng& rng, std::size_t height, std::size_t width);
PatchRect sample_cutmix_patch(Rng& rng, std::size_t height, std::size_t width);

/// beta1 * img + (1 - beta1) * (channel ch replicated three times).
Image spectrum_jitter(const Image& img, Channel ch, double beta1);

/// Gate with cfg.apply_probability, pick a strategy by cfg.strategy_weights,
/// sample its parameters and apply it. record, when given, receives the draw.
Image apply_maa(const Image& img, Rng& rng, const MaaConfig& cfg,
                MaaRecord* record = nullptr);

/// Replicates a single infrared plane into a 3-channel image.
Image expand_infrared(const Plane& plane);

}  // namespace xmodal
