#include "mitodet/core/pmap.hpp"

#include <bit>
#include <cstring>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/core/fs.hpp"

namespace mitodet {
namespace {

constexpr std::size_t kHeaderSize = 4 + 1 + 4 + 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_pmap(const ProbMap& map) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + map.values().size() * 4);
  for (const char c : {'P', 'M', 'A', 'P'}) out.push_back(static_cast<std::uint8_t>(c));
  out.push_back(kPmapVersion);
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  for (const float v : map.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

ProbMap decode_pmap(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), "PMAP", 4) != 0) {
    fail(ErrorKind::kUnsupportedFormat, "pmap: bad magic");
  }
  if (bytes[4] != kPmapVersion) {
    fail(ErrorKind::kUnsupportedFormat,
         "pmap: unsupported version " + std::to_string(bytes[4]));
  }
  const std::uint32_t width = get_u32(bytes, 5);
  const std::uint32_t height = get_u32(bytes, 9);
  const std::uint64_t count = static_cast<std::uint64_t>(width) * height;
  if (width == 0 || height == 0 || width > (1u << 30) || height > (1u << 30)) {
    fail(ErrorKind::kData, "pmap: invalid geometry " + std::to_string(width) + "x" +
                               std::to_string(height));
  }
  if (bytes.size() != kHeaderSize + count * 4) {
    fail(ErrorKind::kData, "pmap: expected " + std::to_string(kHeaderSize + count * 4) +
                               " bytes, got " + std::to_string(bytes.size()));
  }
  std::vector<float> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<float>(get_u32(bytes, kHeaderSize + i * 4));
  }
  try {
    return ProbMap(static_cast<int>(width), static_cast<int>(height), std::move(values));
  } catch (const Error& e) {
    fail(ErrorKind::kData, std::string("pmap: ") + e.what());
  }
}

void write_pmap(const std::filesystem::path& path, const ProbMap& map) {
  write_file_atomic(path, encode_pmap(map));
}

ProbMap read_pmap(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_pmap(bytes);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace mitodet
