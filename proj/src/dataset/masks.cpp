#include <algorithm>
#include <cmath>

#include "mitodet/core/error.hpp"
#include "mitodet/dataset/dataset.hpp"

namespace mitodet::dataset {

BinaryMask disk_mask(const AnnotationSet& ann, int width, int height, int radius) {
  if (radius < 1) fail(ErrorKind::kInvalidArgument, "disk_mask: radius must be >= 1");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(std::max(width, 0)) *
                                 std::max(height, 0));
  const double r2 = static_cast<double>(radius) * radius;
  for (const auto& p : ann.mitotic_points()) {
    const int x_lo = std::max(0, static_cast<int>(std::ceil(p.x - radius)));
    const int x_hi = std::min(width - 1, static_cast<int>(std::floor(p.x + radius)));
    const int y_lo = std::max(0, static_cast<int>(std::ceil(p.y - radius)));
    const int y_hi = std::min(height - 1, static_cast<int>(std::floor(p.y + radius)));
    for (int y = y_lo; y <= y_hi; ++y) {
      const double dy = y - p.y;
      for (int x = x_lo; x <= x_hi; ++x) {
        const double dx = x - p.x;
        if (dx * dx + dy * dy <= r2) bits[static_cast<std::size_t>(y) * width + x] = 1;
      }
    }
  }
  return BinaryMask(width, height, std::move(bits));
}

}  // namespace mitodet::dataset
