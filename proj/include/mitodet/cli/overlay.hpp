#pragma once

#include <span>

#include "mitodet/core/image.hpp"

namespace mitodet::cli {

inline constexpr int kOverlayRadiusPx = 17;

// Circle per detection, blue at score 0 through red at score 1.
ImageRGB draw_overlay(const ImageRGB& image, std::span<const Detection> detections,
                      int radius = kOverlayRadiusPx);

}  // namespace mitodet::cli
