#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mitodet {

inline constexpr double kDefaultMpp = 0.25;

struct Extent {
  int width = 0;
  int height = 0;

  bool operator==(const Extent&) const = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

/// 8-bit interleaved RGB raster, row-major, with its physical pixel size.
class ImageRGB {
 public:
  ImageRGB(int width, int height, std::vector<std::uint8_t> data,
           double mpp = kDefaultMpp);

  static ImageRGB filled(int width, int height, std::array<std::uint8_t, 3> rgb,
                         double mpp = kDefaultMpp);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Extent extent() const noexcept { return {width_, height_}; }
  double mpp() const noexcept { return mpp_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * height_;
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  const std::uint8_t* pixel(int x, int y) const noexcept {
    return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
  }
  std::uint8_t at(int x, int y, int channel) const noexcept {
    return pixel(x, y)[channel];
  }

  // Moves the sample buffer out so a transformed copy can be built cheaply.
  std::vector<std::uint8_t> release() && noexcept { return std::move(data_); }

  bool operator==(const ImageRGB&) const = default;

 private:
  int width_;
  int height_;
  double mpp_;
  std::vector<std::uint8_t> data_;
};

/// Per-pixel score grid; every value lies in [0, 1].
class ProbMap {
 public:
  ProbMap(int width, int height, std::vector<float> values);

  static ProbMap filled(int width, int height, float value);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Extent extent() const noexcept { return {width_, height_}; }
  std::span<const float> values() const noexcept { return values_; }
  float at(int x, int y) const noexcept {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::vector<float> release() && noexcept { return std::move(values_); }

  bool operator==(const ProbMap&) const = default;

 private:
  int width_;
  int height_;
  std::vector<float> values_;
};

/// Boolean grid stored one byte per pixel (0 or 1).
class BinaryMask {
 public:
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  static BinaryMask empty(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Extent extent() const noexcept { return {width_, height_}; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  bool at(int x, int y) const noexcept {
    return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
  }
  std::size_t count() const noexcept;

  std::vector<std::uint8_t> release() && noexcept { return std::move(bits_); }

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

struct Detection {
  Detection(double x, double y, double score);

  double x;
  double y;
  double score;

  bool operator==(const Detection&) const = default;
};

}  // namespace mitodet
