#include <algorithm>
#include <cmath>
#include <numbers>

#include "mitodet/augment/augment.hpp"
#include "mitodet/core/error.hpp"
#include "mitodet/core/filter.hpp"
#include "mitodet/core/raster.hpp"

namespace mitodet::augment {
namespace {

std::uint8_t round_u8(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

// Source coordinate for every output pixel, x and y interleaved.
template <class SourceFn>
std::vector<double> sample_grid(int width, int height, SourceFn source) {
  std::vector<double> grid(static_cast<std::size_t>(width) * height * 2);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const auto [sx, sy] = source(x, y);
      const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 2;
      grid[i] = sx;
      grid[i + 1] = sy;
    }
  }
  return grid;
}

ImageRGB resample_bilinear(const ImageRGB& image, const std::vector<double>& grid) {
  const int w = image.width();
  const int h = image.height();
  std::vector<std::uint8_t> out(image.data().size());
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const double sx = grid[2 * i];
    const double sy = grid[2 * i + 1];
    const double fx0 = std::floor(sx);
    const double fy0 = std::floor(sy);
    const double fx = sx - fx0;
    const double fy = sy - fy0;
    const int x0 = static_cast<int>(fx0);
    const int y0 = static_cast<int>(fy0);
    const int xa = reflect_index(x0, w);
    const int xb = reflect_index(x0 + 1, w);
    const int ya = reflect_index(y0, h);
    const int yb = reflect_index(y0 + 1, h);
    const std::uint8_t* p00 = image.pixel(xa, ya);
    const std::uint8_t* p10 = image.pixel(xb, ya);
    const std::uint8_t* p01 = image.pixel(xa, yb);
    const std::uint8_t* p11 = image.pixel(xb, yb);
    for (int c = 0; c < 3; ++c) {
      const double top = p00[c] + fx * (p10[c] - p00[c]);
      const double bottom = p01[c] + fx * (p11[c] - p01[c]);
      out[3 * i + c] = round_u8(top + fy * (bottom - top));
    }
  }
  return ImageRGB(w, h, std::move(out), image.mpp());
}

BinaryMask resample_nearest(const BinaryMask& mask, const std::vector<double>& grid) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int x = reflect_index(static_cast<int>(std::floor(grid[2 * i] + 0.5)), w);
    const int y = reflect_index(static_cast<int>(std::floor(grid[2 * i + 1] + 0.5)), h);
    out[i] = mask.at(x, y) ? 1 : 0;
  }
  return BinaryMask(w, h, std::move(out));
}

Augmented resample(const ImageRGB& image, const std::optional<BinaryMask>& mask,
                   const std::vector<double>& grid) {
  Augmented out{resample_bilinear(image, grid), std::nullopt};
  if (mask) out.mask = resample_nearest(*mask, grid);
  return out;
}

void check_mask(const ImageRGB& image, const std::optional<BinaryMask>& mask) {
  if (mask && mask->extent() != image.extent()) {
    fail(ErrorKind::kInvalidArgument, "augment: mask geometry does not match image");
  }
}

}  // namespace

std::array<double, 4> rotation_matrix(double degrees) {
  const double t = degrees * std::numbers::pi / 180.0;
  return {std::cos(t), -std::sin(t), std::sin(t), std::cos(t)};
}

std::array<double, 4> shear_matrix(double degrees) {
  return {1.0, std::tan(degrees * std::numbers::pi / 180.0), 0.0, 1.0};
}

std::array<double, 4> zoom_matrix(double scale) { return {scale, 0.0, 0.0, scale}; }

Augmented warp_linear(const ImageRGB& image, const std::optional<BinaryMask>& mask,
                      const std::array<double, 4>& m) {
  check_mask(image, mask);
  const double det = m[0] * m[3] - m[1] * m[2];
  if (!(std::abs(det) > 1e-12)) fail(ErrorKind::kInvalidArgument, "warp: singular matrix");
  const std::array<double, 4> inv{m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
  const double cx = (image.width() - 1) / 2.0;
  const double cy = (image.height() - 1) / 2.0;
  const auto grid = sample_grid(image.width(), image.height(), [&](int x, int y) {
    const double dx = x - cx;
    const double dy = y - cy;
    return std::pair{cx + inv[0] * dx + inv[1] * dy, cy + inv[2] * dx + inv[3] * dy};
  });
  return resample(image, mask, grid);
}

Augmented elastic_deform(const ImageRGB& image, const std::optional<BinaryMask>& mask,
                         double alpha, double sigma_s, Rng& rng) {
  check_mask(image, mask);
  if (!(alpha >= 0.0) || !(sigma_s > 0.0)) {
    fail(ErrorKind::kInvalidArgument, "elastic_deform: need alpha >= 0 and sigma_s > 0");
  }
  const int w = image.width();
  const int h = image.height();
  const std::size_t n = image.pixel_count();
  std::vector<float> dx(n);
  std::vector<float> dy(n);
  for (auto& v : dx) v = static_cast<float>(alpha * rng.uniform(-1.0, 1.0));
  for (auto& v : dy) v = static_cast<float>(alpha * rng.uniform(-1.0, 1.0));
  dx = gaussian_blur_plane(dx, w, h, sigma_s);
  dy = gaussian_blur_plane(dy, w, h, sigma_s);
  const auto grid = sample_grid(w, h, [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * w + x;
    return std::pair{x + static_cast<double>(dx[i]), y + static_cast<double>(dy[i])};
  });
  return resample(image, mask, grid);
}

ImageRGB elastic_deform(const ImageRGB& image, double alpha, double sigma_s, Rng& rng) {
  return elastic_deform(image, std::nullopt, alpha, sigma_s, rng).image;
}

}  // namespace mitodet::augment
