#include "mitodet/core/raster.hpp"

#include <string>
#include <vector>

#include "mitodet/core/error.hpp"

namespace mitodet {
namespace {

// Generic lattice remap: out(x, y) = in(src(x, y)) for interleaved samples.
template <class T, class SourceFn>
std::vector<T> remap(std::span<const T> in, int in_width, int out_width, int out_height,
                     int channels, SourceFn source) {
  std::vector<T> out(static_cast<std::size_t>(out_width) * out_height * channels);
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      const auto [sx, sy] = source(x, y);
      const T* src = in.data() + (static_cast<std::size_t>(sy) * in_width + sx) * channels;
      T* dst = out.data() + (static_cast<std::size_t>(y) * out_width + x) * channels;
      for (int c = 0; c < channels; ++c) dst[c] = src[c];
    }
  }
  return out;
}

struct Rotation {
  int turns;
  int w;
  int h;
  // Counter-clockwise rotation; returns the source pixel of output (x, y).
  std::pair<int, int> operator()(int x, int y) const {
    switch (turns) {
      case 1: return {w - 1 - y, x};
      case 2: return {w - 1 - x, h - 1 - y};
      case 3: return {y, h - 1 - x};
      default: return {x, y};
    }
  }
};

int normalize_turns(int quarter_turns) { return ((quarter_turns % 4) + 4) % 4; }

}  // namespace

int reflect_index(int i, int n) noexcept {
  if (n <= 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

ImageRGB flip_horizontal(const ImageRGB& image) {
  const int w = image.width();
  return ImageRGB(w, image.height(),
                  remap(image.data(), w, w, image.height(), 3,
                        [w](int x, int y) { return std::pair{w - 1 - x, y}; }),
                  image.mpp());
}

ImageRGB flip_vertical(const ImageRGB& image) {
  const int w = image.width();
  const int h = image.height();
  return ImageRGB(w, h,
                  remap(image.data(), w, w, h, 3,
                        [h](int x, int y) { return std::pair{x, h - 1 - y}; }),
                  image.mpp());
}

ImageRGB rotate90(const ImageRGB& image, int quarter_turns) {
  const int t = normalize_turns(quarter_turns);
  const int w = image.width();
  const int h = image.height();
  const int ow = t % 2 ? h : w;
  const int oh = t % 2 ? w : h;
  return ImageRGB(ow, oh, remap(image.data(), w, ow, oh, 3, Rotation{t, w, h}), image.mpp());
}

BinaryMask flip_horizontal(const BinaryMask& mask) {
  const int w = mask.width();
  return BinaryMask(w, mask.height(),
                    remap(mask.bits(), w, w, mask.height(), 1,
                          [w](int x, int y) { return std::pair{w - 1 - x, y}; }));
}

BinaryMask flip_vertical(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  return BinaryMask(w, h, remap(mask.bits(), w, w, h, 1,
                                [h](int x, int y) { return std::pair{x, h - 1 - y}; }));
}

BinaryMask rotate90(const BinaryMask& mask, int quarter_turns) {
  const int t = normalize_turns(quarter_turns);
  const int w = mask.width();
  const int h = mask.height();
  const int ow = t % 2 ? h : w;
  const int oh = t % 2 ? w : h;
  return BinaryMask(ow, oh, remap(mask.bits(), w, ow, oh, 1, Rotation{t, w, h}));
}

ProbMap flip_horizontal(const ProbMap& map) {
  const int w = map.width();
  return ProbMap(w, map.height(),
                 remap(map.values(), w, w, map.height(), 1,
                       [w](int x, int y) { return std::pair{w - 1 - x, y}; }));
}

ProbMap flip_vertical(const ProbMap& map) {
  const int w = map.width();
  const int h = map.height();
  return ProbMap(w, h, remap(map.values(), w, w, h, 1,
                             [h](int x, int y) { return std::pair{x, h - 1 - y}; }));
}

std::vector<int> window_origins(int extent, int size, int stride) {
  if (size < 1 || stride < 1) fail(ErrorKind::kInvalidArgument, "window size and stride must be >= 1");
  if (extent <= size) return {0};
  std::vector<int> origins;
  for (int o = 0;; o += stride) {
    if (o + size >= extent) {
      const int last = extent - size;
      if (origins.empty() || origins.back() != last) origins.push_back(last);
      break;
    }
    origins.push_back(o);
  }
  return origins;
}

ImageRGB crop_reflect(const ImageRGB& image, int x0, int y0, int w, int h) {
  const int iw = image.width();
  const int ih = image.height();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h * 3);
  const bool inside = x0 >= 0 && y0 >= 0 && x0 + w <= iw && y0 + h <= ih;
  for (int y = 0; y < h; ++y) {
    std::uint8_t* dst = out.data() + static_cast<std::size_t>(y) * w * 3;
    if (inside) {
      const std::uint8_t* src = image.pixel(x0, y0 + y);
      std::copy(src, src + static_cast<std::size_t>(w) * 3, dst);
      continue;
    }
    const int sy = reflect_index(y0 + y, ih);
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* src = image.pixel(reflect_index(x0 + x, iw), sy);
      dst[3 * x] = src[0];
      dst[3 * x + 1] = src[1];
      dst[3 * x + 2] = src[2];
    }
  }
  return ImageRGB(w, h, std::move(out), image.mpp());
}

}  // namespace mitodet
