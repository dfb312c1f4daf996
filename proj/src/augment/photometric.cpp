#include <algorithm>
#include <cmath>

#include "mitodet/augment/augment.hpp"
#include "mitodet/core/error.hpp"
#include "mitodet/core/filter.hpp"

namespace mitodet::augment {
namespace {

std::uint8_t round_u8(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

std::vector<float> to_float(const ImageRGB& image) {
  return std::vector<float>(image.data().begin(), image.data().end());
}

template <class Fn>
ImageRGB per_sample(const ImageRGB& image, Fn fn) {
  std::vector<std::uint8_t> out(image.data().size());
  const auto in = image.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = round_u8(fn(in[i], i % 3));
  return ImageRGB(image.width(), image.height(), std::move(out), image.mpp());
}

}  // namespace

ImageRGB gaussian_blur(const ImageRGB& image, double sigma) {
  if (!(sigma > 0.0)) return image;
  const auto blurred =
      gaussian_blur_interleaved(to_float(image), image.width(), image.height(), 3, sigma);
  std::vector<std::uint8_t> out(blurred.size());
  std::transform(blurred.begin(), blurred.end(), out.begin(),
                 [](float v) { return round_u8(v); });
  return ImageRGB(image.width(), image.height(), std::move(out), image.mpp());
}

std::vector<float> unsharp_plane(std::span<const float> plane, int width, int height,
                                 double amount, double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::kInvalidArgument, "unsharp: radius must be positive");
  const auto blurred = gaussian_blur_plane(plane, width, height, radius);
  std::vector<float> out(plane.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(plane[i] + amount * (static_cast<double>(plane[i]) - blurred[i]));
  }
  return out;
}

ImageRGB unsharp(const ImageRGB& image, double amount, double radius) {
  if (!(radius > 0.0)) fail(ErrorKind::kInvalidArgument, "unsharp: radius must be positive");
  if (!(amount >= 0.0)) fail(ErrorKind::kInvalidArgument, "unsharp: amount must be >= 0");
  if (amount == 0.0) return image;
  const auto in = to_float(image);
  const auto blurred = gaussian_blur_interleaved(in, image.width(), image.height(), 3, radius);
  std::vector<std::uint8_t> out(in.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = round_u8(in[i] + amount * (static_cast<double>(in[i]) - blurred[i]));
  }
  return ImageRGB(image.width(), image.height(), std::move(out), image.mpp());
}

ImageRGB adjust_brightness(const ImageRGB& image, double delta) {
  return per_sample(image, [delta](std::uint8_t v, std::size_t) { return v + delta; });
}

ImageRGB adjust_contrast(const ImageRGB& image, double factor) {
  double sum = 0.0;
  for (const auto v : image.data()) sum += v;
  const double mean = sum / static_cast<double>(image.data().size());
  return per_sample(image, [=](std::uint8_t v, std::size_t) { return (v - mean) * factor + mean; });
}

ImageRGB adjust_saturation(const ImageRGB& image, double factor) {
  std::vector<std::uint8_t> out(image.data().size());
  const auto in = image.data();
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const std::uint8_t* p = in.data() + 3 * i;
    const double gray = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    for (int c = 0; c < 3; ++c) out[3 * i + c] = round_u8(gray + factor * (p[c] - gray));
  }
  return ImageRGB(image.width(), image.height(), std::move(out), image.mpp());
}

ImageRGB jitter_color(const ImageRGB& image, const std::array<double, 3>& offsets) {
  return per_sample(image,
                    [&](std::uint8_t v, std::size_t c) { return v + offsets[c]; });
}

}  // namespace mitodet::augment
