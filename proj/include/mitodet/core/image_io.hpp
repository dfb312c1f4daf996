#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mitodet/core/image.hpp"

namespace mitodet {

/// Decodes an 8-bit RGB PNG or TIFF. Other depths and channel counts are
/// rejected with kUnsupportedFormat rather than converted.
///
/// Pixel size comes from a sidecar `<file>.json` holding {"mpp": <real>}
/// when present; otherwise kDefaultMpp.
ImageRGB load_image(const std::filesystem::path& path);

/// Reads an 8-bit single-channel mask; any non-zero sample is foreground.
BinaryMask load_mask(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const ImageRGB& image);
std::vector<std::uint8_t> encode_png(const BinaryMask& mask);

// PNG writers go through write_file_atomic.
void save_png(const std::filesystem::path& path, const ImageRGB& image);
void save_png(const std::filesystem::path& path, const BinaryMask& mask);

bool is_supported_image(const std::filesystem::path& path);

// Supported images in `dir`, sorted by file name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace mitodet
