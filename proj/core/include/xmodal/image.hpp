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
#include <span>
#include <vector>

namespace xmodal {

enum class Channel : int { kRed = 0, kGreen = 1, kBlue = 2 };

/// Single H x W plane of unit-interval intensities (an infrared frame, or
/// one colour channel pulled out of an Image).
class Plane {
 public:
  Plane() = default;
  Plane(std::size_t height, std::size_t width, double fill = 0.0)
      : height_(height), width_(width), data_(height * width, fill) {}

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }

  double& at(std::size_t y, std::size_t x) { return data_[y * width_ + x]; }
  double at(std::size_t y, std::size_t x) const { return data_[y * width_ + x]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

/// Channel-first 3 x H x W image. Values are expected in [0, 1]; call
/// validate() at trust boundaries.
class Image {
 public:
  static constexpr std::size_t kChannels = 3;

  Image() = default;
  Image(std::size_t height, std::size_t width, double fill = 0.0)
      : height_(height), width_(width), data_(kChannels * height * width, fill) {}

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t plane_size() const { return height_ * width_; }

  double& at(Channel c, std::size_t y, std::size_t x) {
    return data_[index(c, y, x)];
  }
  double at(Channel c, std::size_t y, std::size_t x) const {
    return data_[index(c, y, x)];
  }

  std::span<double> plane(Channel c) {
    return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
  }
  std::span<const double> plane(Channel c) const {
    return {data_.data() + static_cast<std::size_t>(c) * plane_size(), plane_size()};
  }

  /// All 3*H*W values, channel-major.
  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }

  Plane extract(Channel c) const;

  /// Throws std::invalid_argument if any value is outside [0,1] or not finite.
  void validate() const;

  /// True when the three planes are bitwise identical.
  bool planes_identical() const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(Channel c, std::size_t y, std::size_t x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

inline constexpr std::array<Channel, 3> kAllChannels = {Channel::kRed, Channel::kGreen,
                                                        Channel::kBlue};

}  // namespace xmodal
