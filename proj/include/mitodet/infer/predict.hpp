#pragma once

#include <span>

#include "mitodet/core/image.hpp"
#include "mitodet/infer/scorer.hpp"
#include "mitodet/infer/tiling.hpp"

namespace mitodet::infer {

/// Scores every window of `plan` and averages overlapping tiles uniformly.
/// Accumulation is in double precision and tiles merge in plan order, so
/// the output does not depend on `jobs`. `base` maps image pixels to the
/// frame the scorer should see (identity unless the image is a TTA variant).
ProbMap run_tiled(const ImageRGB& image, const Scorer& scorer, const TilePlan& plan,
                  int jobs = 1, const TileFrame& base = {});

struct PredictOptions {
  int tile = kTileSize;
  int overlap = kTileOverlap;
  bool tta = true;
  int jobs = 1;
};

/// Mean over scorers x TTA variants, each pulled back to the source frame.
ProbMap predict(const ImageRGB& image, std::span<const ScorerPtr> scorers,
                const PredictOptions& options = {});

}  // namespace mitodet::infer
