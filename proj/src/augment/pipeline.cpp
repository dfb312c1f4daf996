#include <cmath>

#include "mitodet/augment/augment.hpp"
#include "mitodet/core/error.hpp"
#include "mitodet/core/raster.hpp"
#include "mitodet/stain/stain.hpp"

namespace mitodet::augment {

Augmented apply(const ImageRGB& image, const std::optional<BinaryMask>& mask,
                const AugmentSpec& spec, Rng& rng) {
  if (mask && mask->extent() != image.extent()) {
    fail(ErrorKind::kInvalidArgument, "augment: mask geometry does not match image");
  }
  Augmented cur{image, mask};

  auto photometric = [&](ImageRGB next) { cur.image = std::move(next); };
  auto geometric = [&](Augmented next) { cur = std::move(next); };

  for (const auto& step : spec.steps()) {
    if (!rng.bernoulli(step.p)) continue;
    switch (step.kind) {
      case AugmentKind::kFlipH:
        cur.image = flip_horizontal(cur.image);
        if (cur.mask) cur.mask = flip_horizontal(*cur.mask);
        break;
      case AugmentKind::kFlipV:
        cur.image = flip_vertical(cur.image);
        if (cur.mask) cur.mask = flip_vertical(*cur.mask);
        break;
      case AugmentKind::kRotate90: {
        const int turns = rng.uniform_int(static_cast<int>(std::ceil(step.min)),
                                          static_cast<int>(std::floor(step.max)));
        cur.image = rotate90(cur.image, turns);
        if (cur.mask) cur.mask = rotate90(*cur.mask, turns);
        break;
      }
      case AugmentKind::kRotateFree:
        geometric(warp_linear(cur.image, cur.mask,
                              rotation_matrix(rng.uniform(step.min, step.max))));
        break;
      case AugmentKind::kShear:
        geometric(warp_linear(cur.image, cur.mask, shear_matrix(rng.uniform(step.min, step.max))));
        break;
      case AugmentKind::kZoom:
        geometric(warp_linear(cur.image, cur.mask, zoom_matrix(rng.uniform(step.min, step.max))));
        break;
      case AugmentKind::kElastic:
        geometric(elastic_deform(cur.image, cur.mask, rng.uniform(step.min, step.max),
                                 kElasticSmoothingPx, rng));
        break;
      case AugmentKind::kBrightness:
        photometric(adjust_brightness(cur.image, rng.uniform(step.min, step.max)));
        break;
      case AugmentKind::kContrast:
        photometric(adjust_contrast(cur.image, rng.uniform(step.min, step.max)));
        break;
      case AugmentKind::kBlur:
        photometric(gaussian_blur(cur.image, rng.uniform(step.min, step.max)));
        break;
      case AugmentKind::kSharpen:
        photometric(unsharp(cur.image, rng.uniform(step.min, step.max), kSharpenRadiusPx));
        break;
      case AugmentKind::kColorJitter: {
        std::array<double, 3> offsets{};
        for (auto& o : offsets) o = rng.uniform(step.min, step.max);
        photometric(jitter_color(cur.image, offsets));
        break;
      }
      case AugmentKind::kSaturation:
        photometric(adjust_saturation(cur.image, rng.uniform(step.min, step.max)));
        break;
      case AugmentKind::kStain: {
        const double sigma = rng.uniform(step.min, step.max);
        try {
          photometric(stain::augment_stain(cur.image, sigma, rng));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kInsufficientTissue &&
              e.kind() != ErrorKind::kDegenerateStain) {
            throw;
          }
        }
        break;
      }
    }
  }
  return cur;
}

}  // namespace mitodet::augment
