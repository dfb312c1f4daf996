#include "mitodet/infer/tta.hpp"

#include "mitodet/augment/augment.hpp"
#include "mitodet/core/raster.hpp"

namespace mitodet::infer {

std::string_view to_string(TtaKind kind) {
  switch (kind) {
    case TtaKind::kIdentity: return "identity";
    case TtaKind::kFlipH: return "flip_h";
    case TtaKind::kFlipV: return "flip_v";
    case TtaKind::kFlipHV: return "flip_hv";
    case TtaKind::kSharpen: return "sharpen";
  }
  return "unknown";
}

ImageRGB tta_forward(const ImageRGB& image, TtaKind kind) {
  switch (kind) {
    case TtaKind::kFlipH: return flip_horizontal(image);
    case TtaKind::kFlipV: return flip_vertical(image);
    case TtaKind::kFlipHV: return flip_vertical(flip_horizontal(image));
    case TtaKind::kSharpen:
      return augment::unsharp(image, kTtaSharpenAmount, kTtaSharpenRadius);
    case TtaKind::kIdentity: break;
  }
  return image;
}

ProbMap tta_forward(const ProbMap& map, TtaKind kind) {
  switch (kind) {
    case TtaKind::kFlipH: return flip_horizontal(map);
    case TtaKind::kFlipV: return flip_vertical(map);
    case TtaKind::kFlipHV: return flip_vertical(flip_horizontal(map));
    case TtaKind::kIdentity:
    case TtaKind::kSharpen: break;
  }
  return map;
}

// Every variant transform is its own inverse.
ProbMap tta_pull_back(const ProbMap& map, TtaKind kind) { return tta_forward(map, kind); }

std::vector<TtaVariant> tta_expand(const ImageRGB& image, bool include_sharpen) {
  std::vector<TtaVariant> out;
  for (const auto kind : {TtaKind::kIdentity, TtaKind::kFlipH, TtaKind::kFlipV, TtaKind::kFlipHV}) {
    out.push_back({kind, tta_forward(image, kind)});
  }
  if (include_sharpen) out.push_back({TtaKind::kSharpen, tta_forward(image, TtaKind::kSharpen)});
  return out;
}

TileFrame tta_frame(TtaKind kind, Extent extent) {
  const double right = extent.width - 1;
  const double bottom = extent.height - 1;
  switch (kind) {
    case TtaKind::kFlipH: return {right, 0.0, -1, 1};
    case TtaKind::kFlipV: return {0.0, bottom, 1, -1};
    case TtaKind::kFlipHV: return {right, bottom, -1, -1};
    case TtaKind::kIdentity:
    case TtaKind::kSharpen: break;
  }
  return {};
}

}  // namespace mitodet::infer
