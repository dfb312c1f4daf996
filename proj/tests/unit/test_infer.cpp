#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/core/raster.hpp"
#include "mitodet/infer/predict.hpp"
#include "mitodet/infer/scorer.hpp"
#include "mitodet/infer/tiling.hpp"
#include "mitodet/infer/tta.hpp"
#include "mitodet/stain/stain_matrix.hpp"
#include "support.hpp"

namespace {

using namespace mitodet;
using namespace mitodet::infer;

// Deterministic pseudo-random value per (tile origin, pixel); differs across
// overlapping tiles so averaging is actually exercised.
float hash_value(const TileFrame& f, int u, int v) {
  std::uint64_t z = static_cast<std::uint64_t>(f.offset_x) * 0x9E3779B97F4A7C15ull ^
                    static_cast<std::uint64_t>(f.offset_y) * 0xC2B2AE3D27D4EB4Full ^
                    static_cast<std::uint64_t>(u) * 0x165667B19E3779F9ull ^
                    static_cast<std::uint64_t>(v) * 0x27D4EB2F165667C5ull;
  z = (z ^ (z >> 29)) * 0xBF58476D1CE4E5B9ull;
  z ^= z >> 32;
  return static_cast<float>(z % 10007) / 10006.0f;
}

class HashScorer final : public SegmentationScorer {
 public:
  const std::string& id() const override { return id_; }

 protected:
  ProbMap score_tile(const Tile& t) const override {
    std::vector<float> v(t.image.pixel_count());
    for (int y = 0; y < t.image.height(); ++y) {
      for (int x = 0; x < t.image.width(); ++x) v[y * t.image.width() + x] = hash_value(t.frame, x, y);
    }
    return ProbMap(t.image.width(), t.image.height(), std::move(v));
  }

 private:
  std::string id_ = "hash";
};

// 0 for tiles whose origin is at x = 0, 1 everywhere else.
class SplitScorer final : public SegmentationScorer {
 public:
  const std::string& id() const override { return id_; }

 protected:
  ProbMap score_tile(const Tile& t) const override {
    return ProbMap::filled(t.image.width(), t.image.height(), t.frame.offset_x == 0 ? 0.0f : 1.0f);
  }

 private:
  std::string id_ = "split";
};

class ThrowingScorer final : public SegmentationScorer {
 public:
  const std::string& id() const override { return id_; }

 protected:
  ProbMap score_tile(const Tile& t) const override {
    if (t.frame.offset_x > 0) throw std::runtime_error("boom");
    return ProbMap::filled(t.image.width(), t.image.height(), 0.0f);
  }

 private:
  std::string id_ = "thrower";
};

// Score = mean red channel / 255: purely per-pixel, ignores the frame.
class RedScorer final : public SegmentationScorer {
 public:
  const std::string& id() const override { return id_; }

 protected:
  ProbMap score_tile(const Tile& t) const override {
    std::vector<float> v(t.image.pixel_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.image.data()[3 * i] / 255.0f;
    return ProbMap(t.image.width(), t.image.height(), std::move(v));
  }

 private:
  std::string id_ = "red";
};

ImageRGB noise_image(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * 3);
  for (auto& v : data) v = static_cast<std::uint8_t>(rng.below(256));
  return ImageRGB(w, h, std::move(data));
}

AnnotationSet gt_of(const std::vector<Point2>& pts) {
  std::vector<PointAnnotation> a;
  for (const auto& p : pts) a.push_back({p.x, p.y, Label::kMitotic});
  return AnnotationSet("gt", a);
}

std::string fake(const std::string& args) { return std::string(MITODET_FAKE_SCORER) + " " + args; }

// ---- tiling -----------------------------------------------------------------

TEST(PlanTiles, SingleTile) {
  const auto p = plan_tiles(512, 512);
  ASSERT_EQ(p.windows.size(), 1u);
  EXPECT_EQ(p.windows[0], (Window{0, 0, 512, 512}));
  EXPECT_FALSE(p.padded());
}

TEST(PlanTiles, ExactFit949) {
  const auto p = plan_tiles(949, 949);
  EXPECT_EQ(p.xs, (std::vector<int>{0, 437}));
  EXPECT_EQ(p.ys, (std::vector<int>{0, 437}));
  EXPECT_EQ(p.windows.size(), 4u);
}

TEST(PlanTiles, ClampedLastOrigin) {
  const auto p = plan_tiles(1000, 512);
  EXPECT_EQ(p.xs, (std::vector<int>{0, 437, 488}));
  EXPECT_EQ(p.windows.size(), 3u);
  EXPECT_EQ(0 + 512 - 437, 75);
  EXPECT_EQ(437 + 512 - 488, 461);
}

TEST(PlanTiles, SmallImagesArePadded) {
  const auto p = plan_tiles(100, 600);
  EXPECT_TRUE(p.padded());
  EXPECT_EQ(p.padded_width, 512);
  EXPECT_EQ(p.padded_height, 600);
  EXPECT_EQ(p.xs, (std::vector<int>{0}));
}

TEST(PlanTiles, RejectsBadGeometry) {
  EXPECT_THROW(plan_tiles(100, 100, 64, 64), Error);
  EXPECT_THROW(plan_tiles(100, 100, 64, -1), Error);
  EXPECT_THROW(plan_tiles(0, 100), Error);
}

TEST(PlanTiles, CoverageSizeAndOverlapUnderFuzz) {
  Rng rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    const int w = 1 + static_cast<int>(rng.below(4096));
    const int h = 1 + static_cast<int>(rng.below(4096));
    const auto p = plan_tiles(w, h);
    ASSERT_EQ(p.windows.size(), p.xs.size() * p.ys.size());
    for (const auto& win : p.windows) {
      ASSERT_EQ(win.width, 512);
      ASSERT_EQ(win.height, 512);
      ASSERT_GE(win.x0, 0);
      ASSERT_GE(win.y0, 0);
      ASSERT_LE(win.x0 + win.width, p.padded_width);
      ASSERT_LE(win.y0 + win.height, p.padded_height);
    }
    for (const auto* axis : {&p.xs, &p.ys}) {
      const int extent = axis == &p.xs ? p.padded_width : p.padded_height;
      ASSERT_EQ(axis->front(), 0);
      ASSERT_EQ(axis->back() + 512, extent);
      for (std::size_t i = 1; i < axis->size(); ++i) {
        ASSERT_GT((*axis)[i], (*axis)[i - 1]);
        ASSERT_GE((*axis)[i - 1] + 512 - (*axis)[i], 75) << w << "x" << h;
      }
    }
  }
}

// ---- run_tiled --------------------------------------------------------------

TEST(RunTiled, ConstantScorerGivesUniformMap) {
  const auto img = noise_image(1000, 700, 1);
  const auto s = make_constant_scorer(ScorerMode::kSegmentation, 0.7);
  const auto m = run_tiled(img, *s, plan_tiles(1000, 700));
  for (const float v : m.values()) ASSERT_FLOAT_EQ(v, 0.7f);
}

TEST(RunTiled, TwoTilesAverageInTheOverlap) {
  const auto img = ImageRGB::filled(949, 512, {255, 255, 255});
  const auto m = run_tiled(img, SplitScorer{}, plan_tiles(949, 512));
  for (int x = 0; x < 949; ++x) {
    const float want = x < 437 ? 0.0f : x < 512 ? 0.5f : 1.0f;
    ASSERT_EQ(m.at(x, 0), want) << x;
    ASSERT_EQ(m.at(x, 511), want) << x;
  }
}

TEST(RunTiled, MatchesBruteForceAverage) {
  // Independent oracle: for each pixel, average hash_value over every window
  // containing it, in window order.
  const int w = 1100, h = 560;
  const auto img = ImageRGB::filled(w, h, {0, 0, 0});
  const auto p = plan_tiles(w, h, 256, 40);
  const auto m = run_tiled(img, HashScorer{}, p);
  Rng rng(3);
  for (int k = 0; k < 5000; ++k) {
    const int x = static_cast<int>(rng.below(w));
    const int y = static_cast<int>(rng.below(h));
    double sum = 0;
    int n = 0;
    for (const auto& win : p.windows) {
      if (x < win.x0 || x >= win.x0 + win.width || y < win.y0 || y >= win.y0 + win.height) continue;
      sum += hash_value({double(win.x0), double(win.y0), 1, 1}, x - win.x0, y - win.y0);
      ++n;
    }
    ASSERT_GE(n, 1);
    ASSERT_NEAR(m.at(x, y), sum / n, 1e-6);
  }
}

TEST(RunTiled, IndependentOfJobs) {
  const auto img = ImageRGB::filled(1300, 900, {0, 0, 0});
  const auto p = plan_tiles(1300, 900, 200, 30);
  const HashScorer s;
  const auto serial = run_tiled(img, s, p, 1);
  const auto parallel = run_tiled(img, s, p, 4);
  for (std::size_t i = 0; i < serial.values().size(); ++i) {
    ASSERT_NEAR(serial.values()[i], parallel.values()[i], 1e-6);
  }
  EXPECT_EQ(serial, parallel);
}

TEST(RunTiled, PaddedImageIsCroppedBack) {
  const auto img = noise_image(90, 40, 4);
  const auto m = run_tiled(img, RedScorer{}, plan_tiles(90, 40));
  ASSERT_EQ(m.extent(), img.extent());
  for (int x = 0; x < 90; ++x) EXPECT_FLOAT_EQ(m.at(x, 7), img.at(x, 7, 0) / 255.0f);
}

TEST(RunTiled, ScorerFailureNamesTheTile) {
  const auto img = ImageRGB::filled(949, 512, {1, 1, 1});
  try {
    run_tiled(img, ThrowingScorer{}, plan_tiles(949, 512));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kScorer);
    EXPECT_NE(std::string(e.what()).find("(437, 0)"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(RunTiled, RejectsClassifier) {
  const auto img = ImageRGB::filled(10, 10, {1, 1, 1});
  const auto c = make_constant_scorer(ScorerMode::kClassification, 0.5);
  EXPECT_THROW(run_tiled(img, *c, plan_tiles(10, 10)), Error);
}

// ---- oracle / classical scorers --------------------------------------------

TEST(Oracle, AggregatedPeaksSitOnGroundTruth) {
  Rng rng(8);
  const auto pts = testsupport::plant_points(rng, 1200, 900, 12, 20, 40);
  const auto img = testsupport::tissue_with_nuclei(1200, 900, pts, 6, rng);
  const auto m = run_tiled(img, *make_oracle_segmenter(gt_of(pts)), plan_tiles(1200, 900));
  for (const auto& p : pts) {
    int bx = 0, by = 0;
    float best = -1;
    for (int y = int(p.y) - 8; y <= int(p.y) + 8; ++y) {
      for (int x = int(p.x) - 8; x <= int(p.x) + 8; ++x) {
        if (m.at(x, y) > best) {
          best = m.at(x, y);
          bx = x;
          by = y;
        }
      }
    }
    EXPECT_LE(std::hypot(bx - p.x, by - p.y), 1.0);
  }
}

TEST(Oracle, FarTilesAreNearZeroAndPointsScoreOne) {
  const auto s = make_oracle_segmenter(gt_of({{10, 10}, {12, 10}}));
  const auto img = ImageRGB::filled(64, 64, {200, 200, 200});
  const Tile near{"a", img, {}};
  const Tile far{"b", img, {200, 200, 1, 1}};
  const auto maps = s->segment(std::vector<Tile>{near, far});
  EXPECT_FLOAT_EQ(maps[0].at(10, 10), 1.0f);
  EXPECT_FLOAT_EQ(maps[0].at(12, 10), 1.0f);
  EXPECT_GT(maps[0].at(11, 10), 0.98f);  // merged blob between the two points
  EXPECT_LT(*std::max_element(maps[1].values().begin(), maps[1].values().end()), 0.0004f);
  // 4 sigma tail bound: exp(-8) = 0.000335.
  EXPECT_LT(std::exp(-8.0), 0.0004);
}

TEST(Oracle, RespectsFlippedFrames) {
  const auto s = make_oracle_segmenter(gt_of({{5, 20}}));
  const auto img = ImageRGB::filled(32, 32, {0, 0, 0});
  // Tile pixel u maps to source 31 - u, so the point appears at u = 26.
  const auto m = s->segment(std::vector<Tile>{{"f", img, {31, 0, -1, 1}}})[0];
  EXPECT_FLOAT_EQ(m.at(26, 20), 1.0f);
}

TEST(Oracle, ClassifierScoresPatchCentres) {
  const auto c = make_oracle_classifier(gt_of({{100, 100}}));
  const auto img = ImageRGB::filled(128, 128, {0, 0, 0});
  // Centre pixel (64, 64) -> source (x0 + 64, y0 + 64).
  const std::vector<Tile> tiles{{"a", img, {36, 36, 1, 1}}, {"b", img, {56, 36, 1, 1}}};
  const auto s = classify_all(*c, tiles);
  EXPECT_EQ(s, (std::vector<double>{1.0, 0.0}));
}

TEST(Classical, BlankTileIsZero) {
  const auto s = make_classical_scorer();
  const auto img = ImageRGB::filled(64, 64, {255, 255, 255});
  const auto m = s->segment(std::vector<Tile>{{"w", img, {}}})[0];
  for (const float v : m.values()) ASSERT_EQ(v, 0.0f);
}

TEST(Classical, PeakAtHematoxylinBlob) {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Point2 c{rng.uniform(40, 88), rng.uniform(40, 88)};
    const auto img = testsupport::tissue_with_nuclei(128, 128, {c}, 7, rng);
    const auto m = make_classical_scorer()->segment(std::vector<Tile>{{"b", img, {}}})[0];
    // The clamp turns the peak into a plateau; use the plateau's centre.
    const float top = *std::max_element(m.values().begin(), m.values().end());
    ASSERT_GT(top, 0.5f);
    double sx = 0, sy = 0, n = 0;
    for (int y = 0; y < 128; ++y) {
      for (int x = 0; x < 128; ++x) {
        if (m.at(x, y) != top) continue;
        sx += x;
        sy += y;
        ++n;
      }
    }
    EXPECT_LE(std::hypot(sx / n - c.x, sy / n - c.y), 2.0) << "trial " << trial;
  }
}

TEST(Classical, OutputInUnitRange) {
  const auto s = make_classical_scorer();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = s->segment(std::vector<Tile>{{"n", noise_image(48, 48, seed), {}}})[0];
    for (const float v : m.values()) ASSERT_TRUE(v >= 0.0f && v <= 1.0f);
  }
}

// ---- TTA ----------------------------------------------------------------------

TEST(Tta, FiveVariantsInOrder) {
  const auto v = tta_expand(noise_image(8, 6, 1));
  ASSERT_EQ(v.size(), 5u);
  const TtaKind want[] = {TtaKind::kIdentity, TtaKind::kFlipH, TtaKind::kFlipV, TtaKind::kFlipHV,
                          TtaKind::kSharpen};
  for (int i = 0; i < 5; ++i) EXPECT_EQ(v[i].kind, want[i]);
  EXPECT_EQ(tta_expand(noise_image(8, 6, 1), false).size(), 4u);
}

TEST(Tta, PullBackInvertsForward) {
  Rng rng(2);
  std::vector<float> vals(7 * 5);
  for (auto& v : vals) v = static_cast<float>(rng.uniform());
  const ProbMap m(7, 5, vals);
  for (const auto k : {TtaKind::kIdentity, TtaKind::kFlipH, TtaKind::kFlipV, TtaKind::kFlipHV,
                       TtaKind::kSharpen}) {
    EXPECT_EQ(tta_pull_back(tta_forward(m, k), k), m) << to_string(k);
  }
}

TEST(Tta, FrameMapsVariantPixelsToSource) {
  const auto img = noise_image(9, 7, 3);
  for (const auto k : {TtaKind::kIdentity, TtaKind::kFlipH, TtaKind::kFlipV, TtaKind::kFlipHV}) {
    const auto fwd = tta_forward(img, k);
    const auto f = tta_frame(k, img.extent());
    for (int y = 0; y < 7; ++y) {
      for (int x = 0; x < 9; ++x) {
        const auto s = f.to_source(x, y);
        ASSERT_EQ(fwd.at(x, y, 1), img.at(int(s.x), int(s.y), 1)) << to_string(k);
      }
    }
  }
}

TEST(Tta, ConstantImageVariantsCoincide) {
  const auto img = ImageRGB::filled(10, 10, {30, 60, 90});
  for (const auto& v : tta_expand(img)) {
    if (v.kind != TtaKind::kSharpen) {
      EXPECT_EQ(v.image, img);
    }
  }
}

// ---- predict ------------------------------------------------------------------

TEST(Predict, SingleScorerWithoutTtaEqualsRunTiled) {
  const auto img = noise_image(700, 600, 5);
  const ScorerPtr s = std::make_shared<HashScorer>();
  EXPECT_EQ(predict(img, std::vector{s}, {.tta = false}), run_tiled(img, *s, plan_tiles(700, 600)));
}

TEST(Predict, RepeatedScorerEqualsOneCopy) {
  const auto img = noise_image(600, 530, 6);
  const ScorerPtr s = make_classical_scorer();
  const auto one = predict(img, std::vector{s});
  const auto three = predict(img, std::vector{s, s, s});
  for (std::size_t i = 0; i < one.values().size(); ++i) {
    ASSERT_NEAR(one.values()[i], three.values()[i], 1e-6);
  }
}

TEST(Predict, ConstantScorersAverage) {
  const auto img = noise_image(100, 80, 7);
  std::vector<ScorerPtr> s;
  for (const double v : {0.2, 0.4, 0.6}) s.push_back(make_constant_scorer(ScorerMode::kSegmentation, v));
  for (const bool tta : {false, true}) {
    const auto m = predict(img, s, {.tta = tta});
    for (const float v : m.values()) ASSERT_NEAR(v, 0.4, 1e-6);
  }
}

TEST(Predict, TtaMapIsMirrorSymmetricForSymmetricInput) {
  // 949 wide gives origins {0, 437}, a mirror-symmetric plan, so even the
  // sharpened variant's tiling is symmetric; the flip pairs need no help.
  const int w = 949, h = 520;
  const auto half = noise_image(w, h, 8);
  std::vector<std::uint8_t> data(half.data().begin(), half.data().end());
  for (int y = 0; y < h; ++y) {
    for (int x = w / 2 + 1; x < w; ++x) {
      for (int c = 0; c < 3; ++c) data[(y * w + x) * 3 + c] = half.at(w - 1 - x, y, c);
    }
  }
  const ImageRGB img(w, h, data);
  const std::vector<ScorerPtr> scorers{std::make_shared<RedScorer>()};
  const auto m = predict(img, scorers);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w / 2; ++x) ASSERT_EQ(m.at(x, y), m.at(w - 1 - x, y)) << x << "," << y;
  }
  // Per-tile stain statistics sum the mirrored tiles in a different order,
  // so the classical scorer's sharpened variant is symmetric only to rounding.
  const std::vector<ScorerPtr> classical{make_classical_scorer()};
  const auto c = predict(img, classical);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w / 2; ++x) ASSERT_NEAR(c.at(x, y), c.at(w - 1 - x, y), 1e-6);
  }
}

TEST(Predict, FrameAwareScorerIsTtaInvariant) {
  // The oracle sees source coordinates through the frame, so every flip
  // variant reproduces the identity map exactly.
  Rng rng(9);
  const auto pts = testsupport::plant_points(rng, 800, 600, 6, 20, 40);
  const auto img = testsupport::tissue_with_nuclei(800, 600, pts, 6, rng);
  const std::vector<ScorerPtr> s{make_oracle_segmenter(gt_of(pts))};
  const auto with = predict(img, s, {.tta = true});
  const auto without = predict(img, s, {.tta = false});
  for (std::size_t i = 0; i < with.values().size(); ++i) {
    ASSERT_NEAR(with.values()[i], without.values()[i], 1e-6);
  }
}

TEST(Predict, NeedsAScorer) {
  EXPECT_THROW(predict(noise_image(4, 4, 1), {}), Error);
}

// ---- external scorers -------------------------------------------------------------

TEST(External, SegmentationReadsPmaps) {
  const auto s = make_external_scorer(ScorerMode::kSegmentation, fake("--value 0.25"));
  EXPECT_FALSE(s->parallel_safe());
  const auto img = noise_image(600, 520, 10);
  const auto m = run_tiled(img, *s, plan_tiles(600, 520));
  for (const float v : m.values()) ASSERT_FLOAT_EQ(v, 0.25f);
}

TEST(External, ClassificationReadsScores) {
  const auto s = make_external_scorer(ScorerMode::kClassification, fake("--value 0.75"));
  const auto img = noise_image(128, 128, 11);
  const std::vector<Tile> tiles{{"c0", img, {}}, {"c1", img, {5, 5, 1, 1}}};
  EXPECT_EQ(classify_all(*s, tiles), (std::vector<double>{0.75, 0.75}));
}

TEST(External, NonZeroExitIsScorerError) {
  const auto s = make_external_scorer(ScorerMode::kSegmentation, fake("--exit 7"));
  try {
    run_tiled(noise_image(64, 64, 1), *s, plan_tiles(64, 64));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kScorer);
    EXPECT_NE(std::string(e.what()).find("exited with code 7"), std::string::npos) << e.what();
  }
}

TEST(External, MissingOutputIsScorerError) {
  for (const auto mode : {ScorerMode::kSegmentation, ScorerMode::kClassification}) {
    const auto s = make_external_scorer(mode, fake("--skip"));
    const std::vector<Tile> tiles{{"x", noise_image(16, 16, 1), {}}};
    try {
      if (mode == ScorerMode::kSegmentation) {
        s->segment(tiles);
      } else {
        s->classify(tiles);
      }
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kScorer);
    }
  }
}

TEST(External, OutOfRangeClassifierScoreRejected) {
  const auto s = make_external_scorer(ScorerMode::kClassification, fake("--value 1.5"));
  const std::vector<Tile> tiles{{"x", noise_image(16, 16, 1), {}}};
  EXPECT_THROW(classify_all(*s, tiles), Error);
}

}  // namespace
