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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "xmodal/imgproc.hpp"

using namespace xmodal;

namespace {

Image random_image(Rng& rng, std::size_t h, std::size_t w) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(h, w);
  for (double& v : img.values()) v = u(rng);
  return img;
}

Image pixel(double r, double g, double b) {
  Image img(1, 1);
  img.at(Channel::kRed, 0, 0) = r;
  img.at(Channel::kGreen, 0, 0) = g;
  img.at(Channel::kBlue, 0, 0) = b;
  return img;
}

bool in_unit_range(const Image& img) {
  for (double v : img.values()) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return true;
}

}  // namespace

TEST(WeightedGrayscale, RedCornerCopiesRedPlane) {
  Rng rng(1);
  const Image img = random_image(rng, 5, 7);
  const Image out = weighted_grayscale(img, {1.0, 0.0, 0.0});
  for (Channel c : kAllChannels) {
    for (std::size_t y = 0; y < 5; ++y) {
      for (std::size_t x = 0; x < 7; ++x) EXPECT_EQ(out.at(c, y, x), img.at(Channel::kRed, y, x));
    }
  }
}

TEST(WeightedGrayscale, StandardWeightsOnPureRed) {
  const Image out = weighted_grayscale(pixel(1, 0, 0), {0.299, 0.587, 0.114});
  for (Channel c : kAllChannels) EXPECT_NEAR(out.at(c, 0, 0), 0.299, 1e-15);
}

TEST(WeightedGrayscale, EqualWeightsGiveMean) {
  const Image out = weighted_grayscale(pixel(0.3, 0.6, 0.9), {1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (Channel c : kAllChannels) EXPECT_NEAR(out.at(c, 0, 0), 0.6, 1e-12);
}

TEST(WeightedGrayscale, MatchesStandardConversion) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const Image img = random_image(rng, 1 + t % 9, 1 + t % 5);
    const Image out = weighted_grayscale(img, {0.299, 0.587, 0.114});
    const auto expected = oracle::standard_grayscale(img);
    for (Channel c : kAllChannels) {
      const auto plane = out.plane(c);
      for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(plane[i], expected[i], 1e-6);
    }
  }
}

TEST(WeightedGrayscale, RejectsWeightsOffTheSimplex) {
  const Image img(2, 2);
  EXPECT_THROW(weighted_grayscale(img, {0.5, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(weighted_grayscale(img, {1.2, -0.1, -0.1}), std::invalid_argument);
}

TEST(WeightedGrayscale, OneHotWeightsAreChannelExchange) {
  Rng rng(3);
  const Image img = random_image(rng, 3, 3);
  const std::array<Simplex3Weights, 3> corners = {
      Simplex3Weights{1, 0, 0}, Simplex3Weights{0, 1, 0}, Simplex3Weights{0, 0, 1}};
  for (std::size_t k = 0; k < 3; ++k) {
    const Image out = weighted_grayscale(img, corners[k]);
    for (Channel c : kAllChannels) {
      const auto src = img.plane(kAllChannels[k]);
      const auto dst = out.plane(c);
      EXPECT_TRUE(std::equal(src.begin(), src.end(), dst.begin()));
    }
  }
}

TEST(SampleSimplex, SumsToOneAndLiesInRange) {
  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    const auto w = sample_simplex3(rng);
    EXPECT_NEAR(w.a1 + w.a2 + w.a3, 1.0, 1e-12);
    EXPECT_NO_THROW(w.validate());
  }
}

TEST(SampleSimplex, MomentsMatchUniformSimplex) {
  Rng rng(5);
  constexpr int kDraws = 100000;
  double m1 = 0, m2 = 0, m3 = 0;
  int above_half = 0;
  for (int t = 0; t < kDraws; ++t) {
    const auto w = sample_simplex3(rng);
    m1 += w.a1;
    m2 += w.a2;
    m3 += w.a3;
    above_half += w.a1 > 0.5;
  }
  EXPECT_NEAR(m1 / kDraws, 1.0 / 3, 0.01);
  EXPECT_NEAR(m2 / kDraws, 1.0 / 3, 0.01);
  EXPECT_NEAR(m3 / kDraws, 1.0 / 3, 0.01);
  // P(a1 > 1/2) = (1 - 1/2)^2 on the uniform simplex.
  EXPECT_NEAR(static_cast<double>(above_half) / kDraws, 0.25, 0.01);
}

TEST(CrossChannelCutmix, EmptyPatchGivesBackground) {
  Rng rng(6);
  const Image img = random_image(rng, 4, 6);
  const Image out = cross_channel_cutmix(img, Channel::kGreen, Channel::kBlue, {1, 2, 0, 3});
  for (Channel c : kAllChannels) {
    const auto g = img.plane(Channel::kGreen);
    const auto o = out.plane(c);
    EXPECT_TRUE(std::equal(g.begin(), g.end(), o.begin()));
  }
}

TEST(CrossChannelCutmix, FullPatchGivesForeground) {
  Rng rng(7);
  const Image img = random_image(rng, 4, 6);
  const Image out = cross_channel_cutmix(img, Channel::kGreen, Channel::kBlue, {0, 0, 4, 6});
  for (Channel c : kAllChannels) {
    const auto b = img.plane(Channel::kBlue);
    const auto o = out.plane(c);
    EXPECT_TRUE(std::equal(b.begin(), b.end(), o.begin()));
  }
}

TEST(CrossChannelCutmix, PixelsPartitionedByRect) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const std::size_t h = 1 + rng() % 12, w = 1 + rng() % 12;
    const Image img = random_image(rng, h, w);
    const PatchRect rect = sample_cutmix_patch(rng, h, w);
    const auto bg = static_cast<Channel>(rng() % 3);
    const auto fg = static_cast<Channel>((static_cast<int>(bg) + 1 + rng() % 2) % 3);
    const Image out = cross_channel_cutmix(img, bg, fg, rect);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const Channel src = rect.contains(y, x) ? fg : bg;
        for (Channel c : kAllChannels) ASSERT_EQ(out.at(c, y, x), img.at(src, y, x));
      }
    }
  }
}

TEST(CrossChannelCutmix, RejectsSameChannelAndOutOfBoundsRect) {
  const Image img(4, 4);
  EXPECT_THROW(cross_channel_cutmix(img, Channel::kRed, Channel::kRed, {0, 0, 1, 1}),
               std::invalid_argument);
  EXPECT_THROW(cross_channel_cutmix(img, Channel::kRed, Channel::kGreen, {3, 0, 2, 1}),
               std::invalid_argument);
}

TEST(CutmixPatch, LambdaOneIsEmpty) {
  const auto d = cutmix_patch_from(1.0, 3, 3, 8, 8);
  EXPECT_EQ(d.rect.area(), 0u);
}

TEST(CutmixPatch, LambdaZeroAtCentreCoversImage) {
  for (std::size_t h : {1u, 2u, 7u, 8u, 64u}) {
    for (std::size_t w : {1u, 3u, 32u}) {
      const auto d = cutmix_patch_from(0.0, h / 2, w / 2, h, w);
      EXPECT_EQ(d.rect, (PatchRect{0, 0, h, w})) << h << "x" << w;
    }
  }
}

TEST(CutmixPatch, RectAlwaysInsideImage) {
  Rng rng(9);
  for (int t = 0; t < 5000; ++t) {
    const std::size_t h = 1 + rng() % 20, w = 1 + rng() % 20;
    const auto r = sample_cutmix_patch(rng, h, w);
    ASSERT_LE(r.top + r.height, h);
    ASSERT_LE(r.left + r.width, w);
  }
}

TEST(CutmixPatch, UnclippedAreaFractionHasMeanHalf) {
  Rng rng(10);
  double sum = 0.0;
  constexpr int kDraws = 10000;
  for (int t = 0; t < kDraws; ++t) {
    const auto d = draw_cutmix_patch(rng, 64, 32);
    sum += static_cast<double>(d.unclipped_height * d.unclipped_width) / (64.0 * 32.0);
  }
  EXPECT_NEAR(sum / kDraws, 0.5, 0.02);
}

TEST(SpectrumJitter, BetaOneIsIdentity) {
  Rng rng(11);
  const Image img = random_image(rng, 5, 5);
  for (Channel c : kAllChannels) EXPECT_EQ(spectrum_jitter(img, c, 1.0), img);
}

TEST(SpectrumJitter, BetaZeroReplicatesChannel) {
  Rng rng(12);
  const Image img = random_image(rng, 5, 5);
  for (Channel c : kAllChannels) {
    const Image out = spectrum_jitter(img, c, 0.0);
    for (Channel d : kAllChannels) {
      const auto s = img.plane(c);
      const auto o = out.plane(d);
      EXPECT_TRUE(std::equal(s.begin(), s.end(), o.begin()));
    }
  }
}

TEST(SpectrumJitter, MidpointExample) {
  const Image out = spectrum_jitter(pixel(0.2, 0.4, 0.8), Channel::kRed, 0.5);
  EXPECT_NEAR(out.at(Channel::kRed, 0, 0), 0.2, 1e-15);
  EXPECT_NEAR(out.at(Channel::kGreen, 0, 0), 0.3, 1e-15);
  EXPECT_NEAR(out.at(Channel::kBlue, 0, 0), 0.5, 1e-15);
}

TEST(SpectrumJitter, RejectsBetaOutsideUnitInterval) {
  const Image img(1, 1);
  EXPECT_THROW(spectrum_jitter(img, Channel::kRed, -0.1), std::invalid_argument);
  EXPECT_THROW(spectrum_jitter(img, Channel::kRed, 1.5), std::invalid_argument);
}

TEST(ApplyMaa, ClosedGateIsIdentity) {
  Rng rng(13);
  MaaConfig cfg;
  cfg.apply_probability = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Image img = random_image(rng, 4, 4);
    MaaRecord rec;
    EXPECT_EQ(apply_maa(img, rng, cfg, &rec), img);
    EXPECT_FALSE(rec.applied);
  }
}

TEST(ApplyMaa, GrayscaleOnlyConfigSatisfiesWgPostcondition) {
  Rng rng(14);
  MaaConfig cfg;
  cfg.strategy_weights = {1.0, 0.0, 0.0};
  for (int t = 0; t < 200; ++t) {
    const Image img = random_image(rng, 3, 4);
    MaaRecord rec;
    const Image out = apply_maa(img, rng, cfg, &rec);
    ASSERT_EQ(rec.strategy, MaaStrategy::kWeightedGrayscale);
    EXPECT_TRUE(out.planes_identical());
    EXPECT_EQ(out, weighted_grayscale(img, rec.weights));
  }
}

TEST(ApplyMaa, StrategiesChosenUniformly) {
  Rng rng(15);
  const Image img(2, 2);
  std::array<int, 3> counts{};
  constexpr int kDraws = 10000;
  for (int t = 0; t < kDraws; ++t) {
    MaaRecord rec;
    apply_maa(img, rng, MaaConfig{}, &rec);
    ++counts[static_cast<int>(rec.strategy)];
  }
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / kDraws, 1.0 / 3, 0.02);
}

TEST(ApplyMaa, GateFrequencyFollowsProbability) {
  Rng rng(16);
  MaaConfig cfg;
  cfg.apply_probability = 0.3;
  const Image img(1, 1);
  int applied = 0;
  for (int t = 0; t < 10000; ++t) {
    MaaRecord rec;
    apply_maa(img, rng, cfg, &rec);
    applied += rec.applied;
  }
  EXPECT_NEAR(applied / 10000.0, 0.3, 0.02);
}

TEST(ApplyMaa, RecordReproducesOutput) {
  Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    const Image img = random_image(rng, 1 + t % 6, 1 + t % 4);
    MaaRecord rec;
    const Image out = apply_maa(img, rng, MaaConfig{}, &rec);
    Image again;
    switch (rec.strategy) {
      case MaaStrategy::kWeightedGrayscale:
        again = weighted_grayscale(img, rec.weights);
        break;
      case MaaStrategy::kCrossChannelCutmix:
        EXPECT_NE(rec.background, rec.foreground);
        again = cross_channel_cutmix(img, rec.background, rec.foreground, rec.rect);
        break;
      case MaaStrategy::kSpectrumJitter:
        again = spectrum_jitter(img, rec.jitter_channel, rec.beta1);
        break;
    }
    EXPECT_EQ(out, again);
  }
}

TEST(ApplyMaa, DeterministicForEqualRngState) {
  Rng a(18), b(18);
  Rng src(19);
  for (int t = 0; t < 100; ++t) {
    const Image img = random_image(src, 4, 4);
    EXPECT_EQ(apply_maa(img, a, MaaConfig{}), apply_maa(img, b, MaaConfig{}));
  }
}

TEST(ApplyMaa, RejectsBadConfig) {
  Rng rng(0);
  MaaConfig bad;
  bad.strategy_weights = {0, 0, 0};
  EXPECT_THROW(apply_maa(Image(1, 1), rng, bad), std::invalid_argument);
  bad = MaaConfig{};
  bad.apply_probability = 1.5;
  EXPECT_THROW(apply_maa(Image(1, 1), rng, bad), std::invalid_argument);
}

TEST(ImgprocProperties, RangeClosureAndGrayscaleLikeness) {
  Rng rng(20);
  for (int t = 0; t < 2000; ++t) {
    const Image img = random_image(rng, 1 + rng() % 8, 1 + rng() % 8);
    const Image wg = weighted_grayscale(img, sample_simplex3(rng));
    const Image cc = cross_channel_cutmix(img, Channel::kRed, Channel::kBlue,
                                          sample_cutmix_patch(rng, img.height(), img.width()));
    const Image sj = spectrum_jitter(img, static_cast<Channel>(rng() % 3),
                                     std::uniform_real_distribution<double>(0, 1)(rng));
    const Image sj0 = spectrum_jitter(img, Channel::kGreen, 0.0);
    for (const Image* out : {&wg, &cc, &sj, &sj0}) ASSERT_TRUE(in_unit_range(*out));
    ASSERT_TRUE(wg.planes_identical());
    ASSERT_TRUE(cc.planes_identical());
    ASSERT_TRUE(sj0.planes_identical());
  }
}

TEST(ImgprocProperties, OneByOneImagesWork) {
  Rng rng(21);
  const Image img = pixel(0.1, 0.5, 0.9);
  for (int t = 0; t < 100; ++t) {
    const Image out = apply_maa(img, rng, MaaConfig{});
    EXPECT_EQ(out.height(), 1u);
    EXPECT_TRUE(in_unit_range(out));
  }
}

TEST(ExpandInfrared, ConstantPlane) {
  Plane p(3, 2);
  for (double& v : p.values()) v = 0.5;
  const Image img = expand_infrared(p);
  for (double v : img.values()) EXPECT_EQ(v, 0.5);
}

TEST(ExpandInfrared, PlanesEqualAndRoundTrip) {
  Rng rng(22);
  Plane p(4, 5);
  std::uniform_real_distribution<double> u(0, 1);
  for (double& v : p.values()) v = u(rng);
  const Image img = expand_infrared(p);
  EXPECT_TRUE(img.planes_identical());
  for (Channel c : kAllChannels) EXPECT_EQ(img.extract(c), p);
}
