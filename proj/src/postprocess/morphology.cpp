#include <algorithm>
#include <cmath>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/postprocess/postprocess.hpp"

namespace mitodet::postprocess {
namespace {

std::vector<int> half_widths(int radius) {
  std::vector<int> hw(2 * radius + 1);
  for (int dy = -radius; dy <= radius; ++dy) {
    int x = 0;
    while ((x + 1) * (x + 1) + dy * dy <= radius * radius) ++x;
    hw[dy + radius] = x;
  }
  return hw;
}

// prefix[y * (w + 1) + x] = number of pixels in row y, columns [0, x), equal to `value`.
std::vector<int> row_prefix(const BinaryMask& mask, bool value) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> prefix(static_cast<std::size_t>(w + 1) * h, 0);
  const auto bits = mask.bits();
  for (int y = 0; y < h; ++y) {
    int* row = prefix.data() + static_cast<std::size_t>(y) * (w + 1);
    for (int x = 0; x < w; ++x) {
      row[x + 1] = row[x] + ((bits[static_cast<std::size_t>(y) * w + x] != 0) == value ? 1 : 0);
    }
  }
  return prefix;
}

void check_radius(int radius) {
  if (radius < 0) fail(ErrorKind::kInvalidArgument, "morphology: negative radius " + std::to_string(radius));
}

// For erosion: pixel survives when no chord row holds an unset pixel.
// For dilation: pixel is set when some chord row holds a set pixel.
BinaryMask sweep(const BinaryMask& mask, int radius, bool erode) {
  const int w = mask.width();
  const int h = mask.height();
  const auto hw = half_widths(radius);
  const auto prefix = row_prefix(mask, !erode);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool hit = false;
      for (int dy = -radius; dy <= radius && !hit; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        const int a = std::max(0, x - hw[dy + radius]);
        const int b = std::min(w, x + hw[dy + radius] + 1);
        const int* row = prefix.data() + static_cast<std::size_t>(yy) * (w + 1);
        hit = row[b] - row[a] > 0;
      }
      out[static_cast<std::size_t>(y) * w + x] = erode ? !hit : hit;
    }
  }
  return BinaryMask(w, h, std::move(out));
}

}  // namespace

BinaryMask threshold(const ProbMap& map, double thresh) {
  const auto v = map.values();
  std::vector<std::uint8_t> bits(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) bits[i] = v[i] >= thresh ? 1 : 0;
  return BinaryMask(map.width(), map.height(), std::move(bits));
}

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  check_radius(radius);
  std::vector<std::pair<int, int>> out;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= radius * radius) out.emplace_back(dx, dy);
    }
  }
  return out;
}

BinaryMask erode_disk(const BinaryMask& mask, int radius) {
  check_radius(radius);
  return radius == 0 ? mask : sweep(mask, radius, true);
}

BinaryMask dilate_disk(const BinaryMask& mask, int radius) {
  check_radius(radius);
  return radius == 0 ? mask : sweep(mask, radius, false);
}

BinaryMask open_disk(const BinaryMask& mask, int radius) {
  return dilate_disk(erode_disk(mask, radius), radius);
}

}  // namespace mitodet::postprocess
