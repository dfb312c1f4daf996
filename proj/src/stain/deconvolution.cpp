#include <algorithm>
#include <cmath>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/stain/stain.hpp"

namespace mitodet::stain {
namespace {

inline void project(const float* od, const std::array<Vec3, 2>& pinv, float* c) {
  for (int s = 0; s < 2; ++s) {
    const double v = pinv[s][0] * od[0] + pinv[s][1] * od[1] + pinv[s][2] * od[2];
    c[s] = static_cast<float>(std::max(0.0, v));
  }
}

}  // namespace

ConcentrationMap::ConcentrationMap(int width, int height, std::vector<float> values, double mpp)
    : width_(width), height_(height), mpp_(mpp), values_(std::move(values)) {
  if (width_ < 1 || height_ < 1 ||
      values_.size() != static_cast<std::size_t>(width_) * height_ * 2) {
    fail(ErrorKind::kInvalidArgument, "ConcentrationMap: sample count does not match geometry");
  }
  for (const float v : values_) {
    if (!(v >= 0.0f) || !std::isfinite(v)) {
      fail(ErrorKind::kInvalidArgument, "ConcentrationMap: negative or non-finite value");
    }
  }
}

std::vector<float> ConcentrationMap::channel(int stain) const {
  std::vector<float> out(values_.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[2 * i + stain];
  return out;
}

ConcentrationMap deconvolve(const ImageRGB& image, const StainMatrix& m) {
  const auto lut = od_lut();
  const auto& pinv = m.pseudo_inverse();
  const auto data = image.data();
  std::vector<float> c(image.pixel_count() * 2);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const float od[3] = {lut[data[3 * i]], lut[data[3 * i + 1]], lut[data[3 * i + 2]]};
    project(od, pinv, c.data() + 2 * i);
  }
  return ConcentrationMap(image.width(), image.height(), std::move(c), image.mpp());
}

ConcentrationMap deconvolve(const OdField& od, const StainMatrix& m) {
  const auto& pinv = m.pseudo_inverse();
  std::vector<float> c(od.pixel_count() * 2);
  for (std::size_t i = 0; i < od.pixel_count(); ++i) {
    project(od.values.data() + 3 * i, pinv, c.data() + 2 * i);
  }
  return ConcentrationMap(od.width, od.height, std::move(c), od.mpp);
}

OdField compose_od(const ConcentrationMap& c, const StainMatrix& m) {
  const auto& h = m.hematoxylin();
  const auto& e = m.eosin();
  OdField od{c.width(), c.height(), c.mpp(), {}};
  od.values.resize(od.pixel_count() * 3);
  const auto values = c.values();
  for (std::size_t i = 0; i < od.pixel_count(); ++i) {
    const double ch = values[2 * i];
    const double ce = values[2 * i + 1];
    for (int k = 0; k < 3; ++k) {
      od.values[3 * i + k] = static_cast<float>(h[k] * ch + e[k] * ce);
    }
  }
  return od;
}

ImageRGB reconstruct(const ConcentrationMap& c, const StainMatrix& m) {
  return od_to_rgb(compose_od(c, m));
}

ImageRGB augment_stain(const ImageRGB& image, double sigma, Rng& rng) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    fail(ErrorKind::kInvalidArgument, "augment_stain: sigma must lie in [0, 1]");
  }
  const StainMatrix m = estimate_stain_matrix(image);
  const ConcentrationMap c = deconvolve(image, m);
  double scale[2];
  double shift[2];
  for (int s = 0; s < 2; ++s) {
    scale[s] = rng.uniform(1.0 - sigma, 1.0 + sigma);
    shift[s] = rng.uniform(-sigma, sigma);
  }
  std::vector<float> out(c.values().begin(), c.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int s = static_cast<int>(i % 2);
    out[i] = static_cast<float>(std::max(0.0, out[i] * scale[s] + shift[s]));
  }
  return reconstruct(ConcentrationMap(c.width(), c.height(), std::move(out), c.mpp()), m);
}

ImageRGB normalize_stain(const ImageRGB& image, const StainMatrix& target) {
  const StainMatrix own = estimate_stain_matrix(image);
  return reconstruct(deconvolve(image, own), target);
}

}  // namespace mitodet::stain
