#pragma once

#include <vector>

namespace mitodet::infer {

inline constexpr int kTileSize = 512;
inline constexpr int kTileOverlap = 75;

struct Window {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;

  bool operator==(const Window&) const = default;
};

/// Overlapping tile grid over a width x height image. Images narrower or
/// shorter than the tile are reflect-padded up to it, so every window is
/// tile x tile within the padded extent.
struct TilePlan {
  int width = 0;
  int height = 0;
  int tile = kTileSize;
  int overlap = kTileOverlap;
  int padded_width = 0;
  int padded_height = 0;
  std::vector<int> xs;           // window origins along x
  std::vector<int> ys;           // window origins along y
  std::vector<Window> windows;   // row-major over (ys, xs)

  bool padded() const noexcept { return padded_width != width || padded_height != height; }
};

TilePlan plan_tiles(int width, int height, int tile = kTileSize, int overlap = kTileOverlap);

}  // namespace mitodet::infer
