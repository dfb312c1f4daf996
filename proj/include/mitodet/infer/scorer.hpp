#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mitodet/core/annotations.hpp"
#include "mitodet/core/image.hpp"

namespace mitodet::infer {

enum class ScorerMode { kSegmentation, kClassification };

/// Maps tile pixel (u, v) to source-image coordinates:
/// (offset_x + step_x * u, offset_y + step_y * v), steps are +1 or -1.
struct TileFrame {
  double offset_x = 0.0;
  double offset_y = 0.0;
  int step_x = 1;
  int step_y = 1;

  Point2 to_source(double u, double v) const noexcept {
    return {offset_x + step_x * u, offset_y + step_y * v};
  }
  // Frame of the sub-window whose origin is (dx, dy) in this frame.
  TileFrame shifted(int dx, int dy) const noexcept {
    return {offset_x + step_x * dx, offset_y + step_y * dy, step_x, step_y};
  }

  bool operator==(const TileFrame&) const = default;
};

struct Tile {
  std::string id;
  ImageRGB image;
  TileFrame frame;
};

/// A model stand-in. Segmentation scorers return one ProbMap per tile with
/// the tile's geometry; classification scorers one score in [0, 1] per tile.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual const std::string& id() const = 0;
  virtual ScorerMode mode() const = 0;
  // Serial scorers are never called from two threads at once.
  virtual bool parallel_safe() const { return true; }
  // Tiles per call; 0 means the whole run in one call.
  virtual std::size_t batch_size() const { return 1; }

  virtual std::vector<ProbMap> segment(std::span<const Tile> tiles) const;
  virtual std::vector<double> classify(std::span<const Tile> tiles) const;
};

using ScorerPtr = std::shared_ptr<const Scorer>;

class SegmentationScorer : public Scorer {
 public:
  ScorerMode mode() const override { return ScorerMode::kSegmentation; }
  std::vector<ProbMap> segment(std::span<const Tile> tiles) const override;

 protected:
  virtual ProbMap score_tile(const Tile& tile) const = 0;
};

class ClassificationScorer : public Scorer {
 public:
  ScorerMode mode() const override { return ScorerMode::kClassification; }
  std::vector<double> classify(std::span<const Tile> tiles) const override;

 protected:
  virtual double score_patch(const Tile& patch) const = 0;
};

// Scores all patches in scorer-sized batches and checks the [0, 1] contract.
std::vector<double> classify_all(const Scorer& scorer, std::span<const Tile> patches,
                                 int jobs = 1);

inline constexpr double kOracleSigmaPx = 6.0;
inline constexpr double kOracleRadiusPx = 17.0;

/// exp(-d^2 / (2 sigma^2)) with d the distance to the nearest mitotic point.
/// Pixels farther than 10 sigma from every point score exactly 0.
ScorerPtr make_oracle_segmenter(const AnnotationSet& gt, double sigma = kOracleSigmaPx);

/// 1 when a mitotic point lies within `radius` of the patch centre, else 0.
ScorerPtr make_oracle_classifier(const AnnotationSet& gt, double radius = kOracleRadiusPx);

/// Non-learned baseline: hematoxylin concentration from a per-tile stain
/// estimate (reference matrix when the tile has no usable tissue), divided by
/// its 99th percentile, smoothed with sigma 2 px and clamped to [0, 1].
ScorerPtr make_classical_scorer();

ScorerPtr make_constant_scorer(ScorerMode mode, double value);

/// Delegates to `command <workdir>`. The work directory holds one PNG per
/// tile and batch.json; the command writes `<tile_id>.pmap` per tile
/// (segmentation) or scores.json mapping tile id to score (classification).
/// A non-zero exit status aborts with kScorer.
ScorerPtr make_external_scorer(ScorerMode mode, std::string command);

}  // namespace mitodet::infer
