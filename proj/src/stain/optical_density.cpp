#include <algorithm>
#include <array>
#include <cmath>

#include "mitodet/core/error.hpp"
#include "mitodet/stain/stain.hpp"

namespace mitodet::stain {
namespace {

std::array<float, 256> make_lut() {
  std::array<float, 256> lut{};
  for (int i = 0; i < 256; ++i) {
    lut[i] = static_cast<float>(-std::log(std::max(i, 1) / 255.0));
  }
  return lut;
}

}  // namespace

std::span<const float, 256> od_lut() noexcept {
  static const std::array<float, 256> lut = make_lut();
  return lut;
}

OdField rgb_to_od(const ImageRGB& image) {
  const auto lut = od_lut();
  OdField od{image.width(), image.height(), image.mpp(), {}};
  od.values.resize(image.data().size());
  std::transform(image.data().begin(), image.data().end(), od.values.begin(),
                 [&](std::uint8_t v) { return lut[v]; });
  return od;
}

ImageRGB od_to_rgb(const OdField& od) {
  if (od.values.size() != od.pixel_count() * 3) {
    fail(ErrorKind::kInvalidArgument, "od_to_rgb: sample count does not match geometry");
  }
  std::vector<std::uint8_t> data(od.values.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = std::round(255.0 * std::exp(-static_cast<double>(od.values[i])));
    data[i] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
  }
  return ImageRGB(od.width, od.height, std::move(data), od.mpp);
}

}  // namespace mitodet::stain
