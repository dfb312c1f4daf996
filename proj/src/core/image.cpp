#include "mitodet/core/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mitodet/core/error.hpp"

namespace mitodet {
namespace {

void check_geometry(int width, int height, std::size_t actual, std::size_t per_pixel,
                    const char* what) {
  if (width < 1 || height < 1) {
    fail(ErrorKind::kInvalidArgument, std::string(what) + ": geometry must be positive, got " +
                                          std::to_string(width) + "x" + std::to_string(height));
  }
  const std::size_t expected = static_cast<std::size_t>(width) * height * per_pixel;
  if (actual != expected) {
    fail(ErrorKind::kInvalidArgument, std::string(what) + ": expected " +
                                          std::to_string(expected) + " samples, got " +
                                          std::to_string(actual));
  }
}

}  // namespace

ImageRGB::ImageRGB(int width, int height, std::vector<std::uint8_t> data, double mpp)
    : width_(width), height_(height), mpp_(mpp), data_(std::move(data)) {
  check_geometry(width_, height_, data_.size(), 3, "ImageRGB");
  if (!(mpp_ > 0.0) || !std::isfinite(mpp_)) {
    fail(ErrorKind::kInvalidArgument, "ImageRGB: mpp must be positive");
  }
}

ImageRGB ImageRGB::filled(int width, int height, std::array<std::uint8_t, 3> rgb,
                          double mpp) {
  std::vector<std::uint8_t> data(static_cast<std::size_t>(std::max(width, 0)) *
                                 std::max(height, 0) * 3);
  for (std::size_t i = 0; i < data.size(); i += 3) {
    data[i] = rgb[0];
    data[i + 1] = rgb[1];
    data[i + 2] = rgb[2];
  }
  return ImageRGB(width, height, std::move(data), mpp);
}

ProbMap::ProbMap(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_geometry(width_, height_, values_.size(), 1, "ProbMap");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const float v = values_[i];
    // Also rejects NaN.
    if (!(v >= 0.0f && v <= 1.0f)) {
      fail(ErrorKind::kInvalidArgument,
           "ProbMap: value " + std::to_string(v) + " at index " + std::to_string(i) +
               " outside [0, 1]");
    }
  }
}

ProbMap ProbMap::filled(int width, int height, float value) {
  return ProbMap(width, height,
                 std::vector<float>(static_cast<std::size_t>(std::max(width, 0)) *
                                        std::max(height, 0),
                                    value));
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_geometry(width_, height_, bits_.size(), 1, "BinaryMask");
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

BinaryMask BinaryMask::empty(int width, int height) {
  return BinaryMask(width, height,
                    std::vector<std::uint8_t>(
                        static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), 0));
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

Detection::Detection(double x_, double y_, double score_) : x(x_), y(y_), score(score_) {
  if (!(score >= 0.0 && score <= 1.0)) {
    fail(ErrorKind::kInvalidArgument,
         "Detection: score " + std::to_string(score) + " outside [0, 1]");
  }
  if (!std::isfinite(x) || !std::isfinite(y)) {
    fail(ErrorKind::kInvalidArgument, "Detection: non-finite coordinates");
  }
}

}  // namespace mitodet
