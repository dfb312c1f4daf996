#pragma once

// Exact lattice transforms and windowed reads shared by augmentation,
// tiling and TTA.

#include <vector>

#include "mitodet/core/image.hpp"

namespace mitodet {

// Mirror index into [0, n) without repeating the edge sample (…2 1 | 0 1 2 … n-1 | n-2…).
int reflect_index(int i, int n) noexcept;

ImageRGB flip_horizontal(const ImageRGB& image);
ImageRGB flip_vertical(const ImageRGB& image);
ImageRGB rotate90(const ImageRGB& image, int quarter_turns);  // counter-clockwise

BinaryMask flip_horizontal(const BinaryMask& mask);
BinaryMask flip_vertical(const BinaryMask& mask);
BinaryMask rotate90(const BinaryMask& mask, int quarter_turns);

ProbMap flip_horizontal(const ProbMap& map);
ProbMap flip_vertical(const ProbMap& map);

// Window origins along one axis: 0, stride, 2 * stride, ... with the last one
// clamped to extent - size and duplicates dropped. Extents up to `size` give
// the single origin 0.
std::vector<int> window_origins(int extent, int size, int stride);

// Reads the w x h window at (x0, y0); samples outside the image are
// reflect-padded.
ImageRGB crop_reflect(const ImageRGB& image, int x0, int y0, int w, int h);

}  // namespace mitodet
