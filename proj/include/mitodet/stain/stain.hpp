#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mitodet/core/image.hpp"
#include "mitodet/core/rng.hpp"
#include "mitodet/stain/stain_matrix.hpp"

namespace mitodet::stain {

/// Interleaved 3-channel optical density, od = -ln(max(I, 1) / 255).
struct OdField {
  int width = 0;
  int height = 0;
  double mpp = kDefaultMpp;
  std::vector<float> values;

  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width) * height;
  }
};

/// Two non-negative stain concentrations per pixel (hematoxylin, eosin).
class ConcentrationMap {
 public:
  ConcentrationMap(int width, int height, std::vector<float> values,
                   double mpp = kDefaultMpp);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double mpp() const noexcept { return mpp_; }
  std::span<const float> values() const noexcept { return values_; }
  float at(int x, int y, int stain) const noexcept {
    return values_[(static_cast<std::size_t>(y) * width_ + x) * 2 + stain];
  }
  std::vector<float> channel(int stain) const;

 private:
  int width_;
  int height_;
  double mpp_;
  std::vector<float> values_;
};

// OD of each 8-bit level; entry 0 equals entry 1 (the max(I, 1) clamp).
std::span<const float, 256> od_lut() noexcept;

OdField rgb_to_od(const ImageRGB& image);
ImageRGB od_to_rgb(const OdField& od);

struct MacenkoParams {
  double beta = 0.15;              // transparency threshold on every OD channel
  double alpha = 1.0;              // angle percentile, in percent
  std::size_t min_pixels = 100;    // tissue pixels required
  double min_separation_deg = 3.0; // below this the image is treated as single-stain
};

/// Macenko estimate. Throws kInsufficientTissue when fewer than min_pixels
/// pixels pass the OD threshold, kDegenerateStain when the extreme
/// directions are closer than min_separation_deg.
StainMatrix estimate_stain_matrix(const ImageRGB& image, const MacenkoParams& params = {});
StainMatrix estimate_stain_matrix(const OdField& od, const MacenkoParams& params = {});

// Least-squares concentrations via the pseudo-inverse, clamped at zero.
ConcentrationMap deconvolve(const ImageRGB& image, const StainMatrix& m);
ConcentrationMap deconvolve(const OdField& od, const StainMatrix& m);

OdField compose_od(const ConcentrationMap& c, const StainMatrix& m);
ImageRGB reconstruct(const ConcentrationMap& c, const StainMatrix& m);

/// Per stain i: c' = max(0, c * a_i + b_i), a_i ~ U[1-sigma, 1+sigma],
/// b_i ~ U[-sigma, sigma]; draws in the order a_0, b_0, a_1, b_1.
ImageRGB augment_stain(const ImageRGB& image, double sigma, Rng& rng);

// Deconvolve with the image's own estimate, recompose with `target`.
ImageRGB normalize_stain(const ImageRGB& image, const StainMatrix& target);

}  // namespace mitodet::stain
