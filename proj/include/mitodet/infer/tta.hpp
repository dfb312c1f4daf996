#pragma once

#include <string_view>
#include <vector>

#include "mitodet/core/image.hpp"
#include "mitodet/infer/scorer.hpp"

namespace mitodet::infer {

enum class TtaKind { kIdentity, kFlipH, kFlipV, kFlipHV, kSharpen };

std::string_view to_string(TtaKind kind);

inline constexpr double kTtaSharpenAmount = 0.5;
inline constexpr double kTtaSharpenRadius = 1.0;

struct TtaVariant {
  TtaKind kind;
  ImageRGB image;
};

// identity, flip-h, flip-v, both flips, then the sharpened copy.
std::vector<TtaVariant> tta_expand(const ImageRGB& image, bool include_sharpen = true);

ImageRGB tta_forward(const ImageRGB& image, TtaKind kind);
ProbMap tta_forward(const ProbMap& map, TtaKind kind);
// Brings a map computed on the variant back to the source frame.
ProbMap tta_pull_back(const ProbMap& map, TtaKind kind);

// Variant pixel -> source pixel for an image of the given extent.
TileFrame tta_frame(TtaKind kind, Extent extent);

}  // namespace mitodet::infer
