#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mitodet/augment/augment.hpp"
#include "mitodet/core/error.hpp"
#include "mitodet/dataset/dataset.hpp"
#include "support.hpp"

namespace {

using namespace mitodet;
using namespace mitodet::augment;

ImageRGB noise_image(int w, int h, Rng& rng) {
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * 3);
  for (auto& v : data) v = static_cast<std::uint8_t>(rng.below(256));
  return ImageRGB(w, h, std::move(data));
}

Point2 mask_centroid(const BinaryMask& m) {
  double sx = 0, sy = 0;
  std::size_t n = 0;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      sx += x;
      sy += y;
      ++n;
    }
  }
  return {sx / n, sy / n};
}

BinaryMask disk_at(int w, int h, Point2 c, int r) {
  AnnotationSet ann("d", {{c.x, c.y, Label::kMitotic}});
  return dataset::disk_mask(ann, w, h, r);
}

TEST(AugmentSpec, DefaultsValidateAndCoverEveryKind) {
  const auto spec = AugmentSpec::defaults();
  ASSERT_EQ(spec.steps().size(), 14u);
  for (std::size_t i = 0; i < spec.steps().size(); ++i) {
    EXPECT_EQ(static_cast<std::size_t>(spec.steps()[i].kind), i);
  }
}

TEST(AugmentSpec, RejectsBadDescriptors) {
  EXPECT_THROW(AugmentSpec({{AugmentKind::kBrightness, 1.5, 0, 1}}), Error);
  EXPECT_THROW(AugmentSpec({{AugmentKind::kBrightness, -0.1, 0, 1}}), Error);
  EXPECT_THROW(AugmentSpec({{AugmentKind::kBrightness, 0.5, 2, 1}}), Error);
  EXPECT_THROW(AugmentSpec({{AugmentKind::kZoom, 0.5, 0.1, 1}}), Error);
  EXPECT_THROW(AugmentSpec({{AugmentKind::kRotate90, 0.5, 1.2, 1.8}}), Error);
  EXPECT_NO_THROW(AugmentSpec({{AugmentKind::kRotate90, 0.5, 1, 1}}));
}

TEST(AugmentSpec, KindNamesRoundTrip) {
  for (int k = 0; k < 14; ++k) {
    const auto kind = static_cast<AugmentKind>(k);
    EXPECT_EQ(parse_kind(to_string(kind)), kind);
  }
  EXPECT_EQ(parse_kind("FlipH"), AugmentKind::kFlipH);
  EXPECT_EQ(parse_kind("ColorJitter"), AugmentKind::kColorJitter);
  EXPECT_FALSE(parse_kind("mixup").has_value());
}

TEST(Apply, ZeroProbabilityIsIdentity) {
  Rng rng(1);
  const auto img = noise_image(40, 30, rng);
  const auto mask = testsupport::random_mask(rng, 40, 30, 0.3);
  std::vector<AugmentStep> steps = AugmentSpec::defaults().steps();
  for (auto& s : steps) s.p = 0.0;
  Rng r(99);
  const auto out = apply(img, mask, AugmentSpec(steps), r);
  EXPECT_EQ(out.image, img);
  EXPECT_EQ(out.mask, mask);
}

TEST(Apply, FlipHTwiceIsIdentity) {
  Rng rng(2);
  const auto img = noise_image(17, 11, rng);
  const AugmentSpec spec({{AugmentKind::kFlipH, 1.0, 0, 0}});
  Rng a(5), b(6);
  const auto once = apply(img, std::nullopt, spec, a);
  EXPECT_NE(once.image, img);
  EXPECT_EQ(apply(once.image, std::nullopt, spec, b).image, img);
}

TEST(Apply, Rotate90OnTwoByTwo) {
  // Pixels a b / c d (value = channel-0 id). A quarter turn counter-clockwise
  // gives b d / a c.
  const ImageRGB img(2, 2, {1, 0, 0, 2, 0, 0, 3, 0, 0, 4, 0, 0});
  const AugmentSpec spec({{AugmentKind::kRotate90, 1.0, 1, 1}});
  Rng rng(3);
  const auto out = apply(img, std::nullopt, spec, rng).image;
  EXPECT_EQ(out.at(0, 0, 0), 2);
  EXPECT_EQ(out.at(1, 0, 0), 4);
  EXPECT_EQ(out.at(0, 1, 0), 1);
  EXPECT_EQ(out.at(1, 1, 0), 3);
}

TEST(Apply, DeterministicForSeed) {
  Rng g(4);
  const auto img = testsupport::tissue_with_nuclei(64, 48, {{20, 20}, {40, 30}}, 5, g);
  const auto mask = disk_at(64, 48, {20, 20}, 6);
  std::vector<AugmentStep> steps = AugmentSpec::defaults().steps();
  for (auto& s : steps) s.p = 1.0;
  const AugmentSpec spec(steps);
  Rng a(77), b(77), c(78);
  const auto x = apply(img, mask, spec, a);
  const auto y = apply(img, mask, spec, b);
  const auto z = apply(img, mask, spec, c);
  EXPECT_EQ(x.image, y.image);
  EXPECT_EQ(x.mask, y.mask);
  EXPECT_NE(x.image, z.image);
}

TEST(Apply, PhotometricStepsLeaveMaskAlone) {
  Rng g(5);
  const auto img = noise_image(32, 32, g);
  const auto mask = testsupport::random_mask(g, 32, 32, 0.4);
  const auto defaults = AugmentSpec::defaults();
  std::vector<AugmentStep> steps;
  for (const auto& s : defaults.steps()) {
    if (!is_geometric(s.kind)) steps.push_back({s.kind, 1.0, s.min, s.max});
  }
  Rng r(6);
  EXPECT_EQ(apply(img, mask, AugmentSpec(steps), r).mask, mask);
}

TEST(Apply, MaskGeometryMismatchThrows) {
  const auto img = ImageRGB::filled(8, 8, {1, 2, 3});
  Rng r(1);
  EXPECT_THROW(apply(img, BinaryMask::empty(8, 9), AugmentSpec::defaults(), r), Error);
}

// Forward maps of each geometric transform, applied to the analytic centroid.
TEST(Apply, TransformedDiskCentroidTracksTransformedPoint) {
  constexpr int kW = 96, kH = 80;
  Rng g(11);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Point2 c{g.uniform(35, kW - 36.0), g.uniform(32, kH - 33.0)};
    const auto mask = disk_at(kW, kH, c, 8);
    const auto img = ImageRGB::filled(kW, kH, {200, 150, 190});
    const Point2 before = mask_centroid(mask);
    const double cx = (kW - 1) / 2.0, cy = (kH - 1) / 2.0;

    const int which = trial % 6;
    Point2 expect{};
    Augmented out{img, std::nullopt};
    if (which == 0) {
      Rng r(1);
      out = apply(img, mask, AugmentSpec({{AugmentKind::kFlipH, 1, 0, 0}}), r);
      expect = {kW - 1 - before.x, before.y};
    } else if (which == 1) {
      Rng r(1);
      out = apply(img, mask, AugmentSpec({{AugmentKind::kFlipV, 1, 0, 0}}), r);
      expect = {before.x, kH - 1 - before.y};
    } else if (which == 2) {
      Rng r(1);
      out = apply(img, mask, AugmentSpec({{AugmentKind::kRotate90, 1, 1, 1}}), r);
      // out(x, y) = src(w-1-y, x)  =>  src (sx, sy) lands at (sy, w-1-sx).
      expect = {before.y, kW - 1 - before.x};
    } else {
      std::array<double, 4> m{};
      if (which == 3) m = rotation_matrix(g.uniform(-15, 15));
      if (which == 4) m = shear_matrix(g.uniform(-10, 10));
      if (which == 5) m = zoom_matrix(g.uniform(0.8, 1.2));
      out = warp_linear(img, mask, m);
      const double dx = before.x - cx, dy = before.y - cy;
      expect = {cx + m[0] * dx + m[1] * dy, cy + m[2] * dx + m[3] * dy};
    }
    ASSERT_TRUE(out.mask.has_value());
    ASSERT_GT(out.mask->count(), 0u);
    const Point2 after = mask_centroid(*out.mask);
    EXPECT_LE(std::hypot(after.x - expect.x, after.y - expect.y), 0.75) << "trial " << trial;
    ++checked;
  }
  EXPECT_EQ(checked, 60);
}

TEST(Apply, PhotometricOutputsStayInRangeUnderFuzz) {
  // Extreme-but-legal parameters push most samples into the clamp.
  Rng g(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto img = noise_image(24, 24, g);
    std::vector<AugmentStep> steps{
        {AugmentKind::kBrightness, 1, -255, 255}, {AugmentKind::kContrast, 1, 0, 4},
        {AugmentKind::kSharpen, 1, 0, 5},         {AugmentKind::kColorJitter, 1, -255, 255},
        {AugmentKind::kSaturation, 1, 0, 4},      {AugmentKind::kBlur, 1, 0, 10},
    };
    Rng r(static_cast<std::uint64_t>(trial));
    const auto out = apply(img, std::nullopt, AugmentSpec(steps), r).image;
    EXPECT_EQ(out.extent(), img.extent());
    EXPECT_EQ(out.data().size(), img.data().size());
  }
  // The float core shows the values the clamp has to catch.
  std::vector<float> plane(64);
  for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = (i / 4) % 2 ? 255.0f : 0.0f;
  const auto raw = unsharp_plane(plane, 64, 1, 5.0, 1.0);
  EXPECT_GT(*std::max_element(raw.begin(), raw.end()), 255.0f);
  EXPECT_LT(*std::min_element(raw.begin(), raw.end()), 0.0f);
}

TEST(Elastic, ZeroAlphaIsIdentity) {
  Rng g(31);
  const auto img = noise_image(30, 20, g);
  Rng r(1);
  EXPECT_EQ(elastic_deform(img, 0.0, 4.0, r), img);
}

TEST(Elastic, ConstantImageStaysConstant) {
  const auto img = ImageRGB::filled(40, 40, {12, 200, 77});
  Rng r(2);
  EXPECT_EQ(elastic_deform(img, 25.0, 4.0, r), img);
}

TEST(Elastic, DeterministicForSeed) {
  Rng g(32);
  const auto img = noise_image(48, 48, g);
  Rng a(9), b(9);
  const auto x = elastic_deform(img, 10.0, 4.0, a);
  EXPECT_EQ(x, elastic_deform(img, 10.0, 4.0, b));
  EXPECT_NE(x, img);
}

TEST(Elastic, RejectsBadParameters) {
  const auto img = ImageRGB::filled(4, 4, {0, 0, 0});
  Rng r(1);
  EXPECT_THROW(elastic_deform(img, -1.0, 4.0, r), Error);
  EXPECT_THROW(elastic_deform(img, 1.0, 0.0, r), Error);
}

TEST(Unsharp, ZeroAmountIsIdentity) {
  Rng g(41);
  const auto img = noise_image(20, 20, g);
  EXPECT_EQ(unsharp(img, 0.0, 1.0), img);
}

TEST(Unsharp, ConstantImageUnchanged) {
  const auto img = ImageRGB::filled(25, 9, {90, 180, 3});
  for (const double amount : {0.3, 1.0, 4.0}) EXPECT_EQ(unsharp(img, amount, 1.5), img);
}

TEST(Unsharp, StepEdgeOvershootsOnBothSides) {
  // 7 taps of exp(-k^2/2), k = -3..3, summed by hand on a 0 -> 255 step.
  std::vector<double> w;
  double norm = 0.0;
  for (int k = -3; k <= 3; ++k) {
    w.push_back(std::exp(-k * k / 2.0));
    norm += w.back();
  }
  for (auto& v : w) v /= norm;
  const double tail = w[4] + w[5] + w[6];  // weight reaching across the edge
  const double low_expect = 0.0 - 255.0 * tail;
  const double high_expect = 255.0 + 255.0 * tail;

  std::vector<float> plane(16, 0.0f);
  std::fill(plane.begin() + 8, plane.end(), 255.0f);
  const auto out = unsharp_plane(plane, 16, 1, 1.0, 1.0);
  EXPECT_NEAR(out[7], low_expect, 1e-3);
  EXPECT_NEAR(out[8], high_expect, 1e-3);
  EXPECT_LT(out[7], 0.0f);
  EXPECT_GT(out[8], 255.0f);
  EXPECT_FLOAT_EQ(out[0], 0.0f);
  EXPECT_FLOAT_EQ(out[15], 255.0f);

  // On 8-bit data the overshoot is only visible away from the clamp limits.
  std::vector<std::uint8_t> data;
  for (int x = 0; x < 16; ++x) {
    const std::uint8_t v = x < 8 ? 80 : 160;
    data.insert(data.end(), {v, v, v});
  }
  const auto sharp = unsharp(ImageRGB(16, 1, data), 1.0, 1.0);
  EXPECT_EQ(sharp.at(7, 0, 0), std::lround(80 - 80 * tail));
  EXPECT_EQ(sharp.at(8, 0, 0), std::lround(160 + 80 * tail));
}

TEST(Unsharp, RejectsBadParameters) {
  const auto img = ImageRGB::filled(4, 4, {0, 0, 0});
  EXPECT_THROW(unsharp(img, 1.0, 0.0), Error);
  EXPECT_THROW(unsharp(img, -1.0, 1.0), Error);
}

TEST(Photometric, BrightnessAndJitterAreOffsets) {
  const ImageRGB img(1, 1, {10, 100, 250});
  EXPECT_EQ(adjust_brightness(img, 10).data()[2], 255);
  EXPECT_EQ(adjust_brightness(img, -20).data()[0], 0);
  const auto j = jitter_color(img, {1.4, -2.6, 0});
  EXPECT_EQ(j.data()[0], 11);
  EXPECT_EQ(j.data()[1], 97);
  EXPECT_EQ(j.data()[2], 250);
}

TEST(Photometric, SaturationZeroIsGray) {
  const ImageRGB img(1, 1, {200, 50, 100});
  const auto g = adjust_saturation(img, 0.0);
  const long gray = std::lround(0.299 * 200 + 0.587 * 50 + 0.114 * 100);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(g.data()[c], gray);
  EXPECT_EQ(adjust_saturation(img, 1.0), img);
}

TEST(Photometric, ContrastOneIsIdentity) {
  Rng g(51);
  const auto img = noise_image(10, 10, g);
  EXPECT_EQ(adjust_contrast(img, 1.0), img);
  const auto flat = adjust_contrast(img, 0.0);
  const auto first = flat.data()[0];
  for (const auto v : flat.data()) EXPECT_EQ(v, first);
}

}  // namespace
