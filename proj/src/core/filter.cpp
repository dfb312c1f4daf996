#include "mitodet/core/filter.hpp"

#include <cmath>

#include "mitodet/core/raster.hpp"

namespace mitodet {

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) return {1.0};
  const int half = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * half + 1);
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    taps[i + half] = v;
    sum += v;
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

std::vector<float> gaussian_blur_interleaved(std::span<const float> data, int width,
                                             int height, int channels, double sigma) {
  if (!(sigma > 0.0)) return std::vector<float>(data.begin(), data.end());
  const auto taps = gaussian_kernel(sigma);
  const int half = static_cast<int>(taps.size() / 2);
  const std::size_t row = static_cast<std::size_t>(width) * channels;

  // Horizontal pass into a double buffer, then vertical pass. Taps are added
  // in mirrored pairs, so blurring a mirrored input gives the exact mirror.
  std::vector<double> tmp(data.size());
  std::vector<int> xs(width + 2 * half);
  for (int i = 0; i < width + 2 * half; ++i) xs[i] = reflect_index(i - half, width);
  for (int y = 0; y < height; ++y) {
    const float* src = data.data() + y * row;
    double* dst = tmp.data() + y * row;
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        auto at = [&](int i) {
          return static_cast<double>(src[static_cast<std::size_t>(xs[x + half + i]) * channels + c]);
        };
        double acc = taps[half] * at(0);
        for (int k = 1; k <= half; ++k) acc += taps[half + k] * (at(-k) + at(k));
        dst[static_cast<std::size_t>(x) * channels + c] = acc;
      }
    }
  }

  std::vector<float> out(data.size());
  std::vector<double> acc(row);
  for (int y = 0; y < height; ++y) {
    const double* mid = tmp.data() + static_cast<std::size_t>(y) * row;
    for (std::size_t i = 0; i < row; ++i) acc[i] = taps[half] * mid[i];
    for (int k = 1; k <= half; ++k) {
      const double t = taps[half + k];
      const double* up = tmp.data() + static_cast<std::size_t>(reflect_index(y - k, height)) * row;
      const double* down = tmp.data() + static_cast<std::size_t>(reflect_index(y + k, height)) * row;
      for (std::size_t i = 0; i < row; ++i) acc[i] += t * (up[i] + down[i]);
    }
    float* dst = out.data() + y * row;
    for (std::size_t i = 0; i < row; ++i) dst[i] = static_cast<float>(acc[i]);
  }
  return out;
}

std::vector<float> gaussian_blur_plane(std::span<const float> plane, int width, int height,
                                       double sigma) {
  return gaussian_blur_interleaved(plane, width, height, 1, sigma);
}

}  // namespace mitodet
