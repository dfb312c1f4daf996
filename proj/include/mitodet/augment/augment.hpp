#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mitodet/core/image.hpp"
#include "mitodet/core/rng.hpp"

namespace mitodet::augment {

enum class AugmentKind {
  kFlipH,
  kFlipV,
  kRotate90,
  kRotateFree,
  kShear,
  kZoom,
  kElastic,
  kBrightness,
  kContrast,
  kBlur,
  kSharpen,
  kColorJitter,
  kSaturation,
  kStain,
};

std::string_view to_string(AugmentKind kind);
std::optional<AugmentKind> parse_kind(std::string_view name);
bool is_geometric(AugmentKind kind);

struct ParamLimits {
  double lo;
  double hi;
};

// Bounds a descriptor's [min, max] must stay within. Units per kind:
//   Rotate90 quarter turns; RotateFree, Shear degrees; Zoom scale factor;
//   Elastic displacement px; Brightness, ColorJitter 8-bit levels;
//   Contrast, Saturation factor; Blur sigma px; Sharpen amount;
//   Stain perturbation sigma. Flips take no parameter.
ParamLimits limits_for(AugmentKind kind);

struct AugmentStep {
  AugmentKind kind;
  double p;
  double min;
  double max;

  bool operator==(const AugmentStep&) const = default;
};

// Gaussian smoothing used for the Elastic descriptor's displacement field.
inline constexpr double kElasticSmoothingPx = 4.0;
// Radius of the Sharpen descriptor's unsharp mask.
inline constexpr double kSharpenRadiusPx = 1.0;

/// Ordered augmentation descriptors; steps run in list order.
class AugmentSpec {
 public:
  AugmentSpec() = default;
  explicit AugmentSpec(std::vector<AugmentStep> steps);

  // Every kind in enum order with the documented default magnitudes.
  static AugmentSpec defaults();

  const std::vector<AugmentStep>& steps() const noexcept { return steps_; }

  bool operator==(const AugmentSpec&) const = default;

 private:
  std::vector<AugmentStep> steps_;
};

struct Augmented {
  ImageRGB image;
  std::optional<BinaryMask> mask;
};

/// Runs each step with its own Bernoulli(p) draw, then draws its parameters
/// uniformly from [min, max]. Geometric steps move image (bilinear) and mask
/// (nearest) together with reflect padding; photometric steps touch only the
/// image. A Stain step on an image without enough tissue leaves it unchanged.
Augmented apply(const ImageRGB& image, const std::optional<BinaryMask>& mask,
                const AugmentSpec& spec, Rng& rng);

// Affine warp about the image centre. `matrix` is the forward 2x2 linear map
// (row-major); output keeps the input geometry.
Augmented warp_linear(const ImageRGB& image, const std::optional<BinaryMask>& mask,
                      const std::array<double, 4>& matrix);
std::array<double, 4> rotation_matrix(double degrees);
std::array<double, 4> shear_matrix(double degrees);
std::array<double, 4> zoom_matrix(double scale);

ImageRGB elastic_deform(const ImageRGB& image, double alpha, double sigma_s, Rng& rng);
Augmented elastic_deform(const ImageRGB& image, const std::optional<BinaryMask>& mask,
                         double alpha, double sigma_s, Rng& rng);

ImageRGB gaussian_blur(const ImageRGB& image, double sigma);

// out = clamp(I + amount * (I - blur(I, radius))), rounded to nearest.
ImageRGB unsharp(const ImageRGB& image, double amount, double radius);
// Unclamped float core of unsharp on a single plane.
std::vector<float> unsharp_plane(std::span<const float> plane, int width, int height,
                                 double amount, double radius);

ImageRGB adjust_brightness(const ImageRGB& image, double delta);
ImageRGB adjust_contrast(const ImageRGB& image, double factor);
ImageRGB adjust_saturation(const ImageRGB& image, double factor);
ImageRGB jitter_color(const ImageRGB& image, const std::array<double, 3>& offsets);

}  // namespace mitodet::augment
