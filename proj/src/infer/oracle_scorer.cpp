#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/infer/scorer.hpp"

namespace mitodet::infer {
namespace {

class OracleSegmenter final : public SegmentationScorer {
 public:
  OracleSegmenter(std::vector<Point2> points, double sigma)
      : points_(std::move(points)), sigma_(sigma), id_("oracle-segmenter") {}

  const std::string& id() const override { return id_; }

 protected:
  ProbMap score_tile(const Tile& tile) const override {
    const int w = tile.image.width();
    const int h = tile.image.height();
    const Point2 a = tile.frame.to_source(0, 0);
    const Point2 b = tile.frame.to_source(w - 1, h - 1);
    const double reach = 10.0 * sigma_;
    const double lo_x = std::min(a.x, b.x) - reach;
    const double hi_x = std::max(a.x, b.x) + reach;
    const double lo_y = std::min(a.y, b.y) - reach;
    const double hi_y = std::max(a.y, b.y) + reach;
    std::vector<Point2> near;
    for (const auto& p : points_) {
      if (p.x >= lo_x && p.x <= hi_x && p.y >= lo_y && p.y <= hi_y) near.push_back(p);
    }

    // max of exp(-d^2 k) over points == exp(-min d^2 k), evaluated only in
    // each point's 10-sigma box.
    std::vector<float> values(static_cast<std::size_t>(w) * h, 0.0f);
    const double inv = 1.0 / (2.0 * sigma_ * sigma_);
    const double reach2 = reach * reach;
    for (const auto& p : near) {
      const double ua = (p.x - reach - tile.frame.offset_x) * tile.frame.step_x;
      const double ub = (p.x + reach - tile.frame.offset_x) * tile.frame.step_x;
      const double va = (p.y - reach - tile.frame.offset_y) * tile.frame.step_y;
      const double vb = (p.y + reach - tile.frame.offset_y) * tile.frame.step_y;
      const int u0 = std::max(0, static_cast<int>(std::floor(std::min(ua, ub))));
      const int u1 = std::min(w - 1, static_cast<int>(std::ceil(std::max(ua, ub))));
      const int v0 = std::max(0, static_cast<int>(std::floor(std::min(va, vb))));
      const int v1 = std::min(h - 1, static_cast<int>(std::ceil(std::max(va, vb))));
      for (int v = v0; v <= v1; ++v) {
        for (int u = u0; u <= u1; ++u) {
          const Point2 s = tile.frame.to_source(u, v);
          const double d2 = (s.x - p.x) * (s.x - p.x) + (s.y - p.y) * (s.y - p.y);
          if (d2 > reach2) continue;
          float& out = values[static_cast<std::size_t>(v) * w + u];
          out = std::max(out, static_cast<float>(std::exp(-d2 * inv)));
        }
      }
    }
    return ProbMap(w, h, std::move(values));
  }

 private:
  std::vector<Point2> points_;
  double sigma_;
  std::string id_;
};

class OracleClassifier final : public ClassificationScorer {
 public:
  OracleClassifier(std::vector<Point2> points, double radius)
      : points_(std::move(points)), radius_(radius), id_("oracle-classifier") {}

  const std::string& id() const override { return id_; }

 protected:
  double score_patch(const Tile& patch) const override {
    // Centre pixel of the patch, in source coordinates.
    const Point2 c =
        patch.frame.to_source(patch.image.width() / 2, patch.image.height() / 2);
    const double r2 = radius_ * radius_;
    for (const auto& p : points_) {
      const double dx = c.x - p.x;
      const double dy = c.y - p.y;
      if (dx * dx + dy * dy <= r2) return 1.0;
    }
    return 0.0;
  }

 private:
  std::vector<Point2> points_;
  double radius_;
  std::string id_;
};

}  // namespace

ScorerPtr make_oracle_segmenter(const AnnotationSet& gt, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorKind::kInvalidArgument, "oracle segmenter: sigma must be > 0");
  return std::make_shared<OracleSegmenter>(gt.mitotic_points(), sigma);
}

ScorerPtr make_oracle_classifier(const AnnotationSet& gt, double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::kInvalidArgument, "oracle classifier: radius must be > 0");
  return std::make_shared<OracleClassifier>(gt.mitotic_points(), radius);
}

}  // namespace mitodet::infer
