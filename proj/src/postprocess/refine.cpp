#include <cmath>
#include <cstdio>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/core/parallel.hpp"
#include "mitodet/core/raster.hpp"
#include "mitodet/infer/tta.hpp"
#include "mitodet/postprocess/postprocess.hpp"

namespace mitodet::postprocess {

using infer::TtaKind;

std::vector<Detection> refine(const ImageRGB& image, std::span<const Candidate> candidates,
                              std::span<const infer::ScorerPtr> classifiers,
                              const RefineParams& params) {
  if (params.patch < 1) fail(ErrorKind::kInvalidArgument, "refine: patch size must be >= 1");
  if (!(params.accept >= 0.0 && params.accept <= 1.0)) {
    fail(ErrorKind::kInvalidArgument, "refine: accept threshold outside [0, 1]");
  }
  if (classifiers.empty()) fail(ErrorKind::kInvalidArgument, "refine: need at least one classifier");
  bool parallel = true;
  for (const auto& c : classifiers) {
    if (!c || c->mode() != infer::ScorerMode::kClassification) {
      fail(ErrorKind::kInvalidArgument, "refine: scorer is not a classifier");
    }
    parallel = parallel && c->parallel_safe();
  }

  const std::vector<TtaKind> kinds =
      params.tta ? std::vector<TtaKind>{TtaKind::kIdentity, TtaKind::kFlipH, TtaKind::kFlipV,
                                        TtaKind::kFlipHV}
                 : std::vector<TtaKind>{TtaKind::kIdentity};
  const Extent patch_extent{params.patch, params.patch};

  std::vector<double> scores(candidates.size());
  parallel_for(candidates.size(), parallel ? params.jobs : 1, [&](std::size_t i) {
    const Candidate& c = candidates[i];
    const int x0 = static_cast<int>(std::lround(c.centroid.x)) - params.patch / 2;
    const int y0 = static_cast<int>(std::lround(c.centroid.y)) - params.patch / 2;
    const ImageRGB patch = crop_reflect(image, x0, y0, params.patch, params.patch);

    std::vector<infer::Tile> tiles;
    for (const TtaKind k : kinds) {
      const infer::TileFrame f = infer::tta_frame(k, patch_extent);
      char id[48];
      std::snprintf(id, sizeof(id), "c%05zu_%s", i, std::string(infer::to_string(k)).c_str());
      tiles.push_back({id, infer::tta_forward(patch, k),
                       {x0 + f.offset_x, y0 + f.offset_y, f.step_x, f.step_y}});
    }

    double sum = 0.0;
    for (const auto& clf : classifiers) {
      std::vector<double> got;
      try {
        got = clf->classify(tiles);
      } catch (const std::exception& e) {
        char where[96];
        std::snprintf(where, sizeof(where), "candidate %zu at (%.1f, %.1f)", i, c.centroid.x,
                      c.centroid.y);
        fail(ErrorKind::kScorer, "classifier '" + clf->id() + "' failed on " + where + ": " + e.what());
      }
      if (got.size() != tiles.size()) {
        fail(ErrorKind::kScorer, "classifier '" + clf->id() + "' returned " +
                                     std::to_string(got.size()) + " scores for " +
                                     std::to_string(tiles.size()) + " patches");
      }
      for (const double s : got) {
        if (!(s >= 0.0 && s <= 1.0)) {
          fail(ErrorKind::kScorer, "classifier '" + clf->id() + "' returned a score outside [0, 1] for candidate " +
                                       std::to_string(i));
        }
        sum += s;
      }
    }
    scores[i] = sum / static_cast<double>(classifiers.size() * tiles.size());
  });

  std::vector<Detection> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (scores[i] >= params.accept) {
      out.emplace_back(candidates[i].centroid.x, candidates[i].centroid.y, scores[i]);
    }
  }
  return out;
}

}  // namespace mitodet::postprocess
