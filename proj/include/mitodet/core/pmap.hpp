#pragma once

// PMAP: "PMAP" magic, u8 version (1), u32 LE width, u32 LE height, then
// width*height float32 LE values in row-major order.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mitodet/core/image.hpp"

namespace mitodet {

inline constexpr std::uint8_t kPmapVersion = 1;

std::vector<std::uint8_t> encode_pmap(const ProbMap& map);
ProbMap decode_pmap(std::span<const std::uint8_t> bytes);

void write_pmap(const std::filesystem::path& path, const ProbMap& map);
ProbMap read_pmap(const std::filesystem::path& path);

}  // namespace mitodet
