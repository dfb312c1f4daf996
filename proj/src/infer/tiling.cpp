#include "mitodet/infer/tiling.hpp"

#include <algorithm>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/core/raster.hpp"

namespace mitodet::infer {

TilePlan plan_tiles(int width, int height, int tile, int overlap) {
  if (width < 1 || height < 1) fail(ErrorKind::kInvalidArgument, "plan_tiles: empty image");
  if (!(tile > overlap && overlap >= 0)) {
    fail(ErrorKind::kInvalidArgument, "plan_tiles: need tile > overlap >= 0, got tile " +
                                          std::to_string(tile) + ", overlap " +
                                          std::to_string(overlap));
  }
  TilePlan plan;
  plan.width = width;
  plan.height = height;
  plan.tile = tile;
  plan.overlap = overlap;
  plan.padded_width = std::max(width, tile);
  plan.padded_height = std::max(height, tile);
  const int stride = tile - overlap;
  plan.xs = window_origins(plan.padded_width, tile, stride);
  plan.ys = window_origins(plan.padded_height, tile, stride);
  plan.windows.reserve(plan.xs.size() * plan.ys.size());
  for (const int y : plan.ys) {
    for (const int x : plan.xs) plan.windows.push_back({x, y, tile, tile});
  }
  return plan;
}

}  // namespace mitodet::infer
