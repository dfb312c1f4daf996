#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mitodet/core/annotations.hpp"
#include "mitodet/core/image.hpp"
#include "mitodet/core/rng.hpp"

namespace mitodet::dataset {

inline constexpr int kDiskRadiusPx = 17;
inline constexpr int kSegmentationPatch = 512;
inline constexpr int kClassificationPatch = 128;

enum class Polarity { kPositive, kNegative };

std::string_view to_string(Polarity polarity);

struct PatchRecord {
  std::string image_id;
  int x0 = 0;
  int y0 = 0;
  int size = kSegmentationPatch;
  Polarity polarity = Polarity::kNegative;

  bool operator==(const PatchRecord&) const = default;
};

// Pseudo-GT: union of radius-`radius` disks at the mitotic points, clipped
// to the raster. Imposter points draw nothing.
BinaryMask disk_mask(const AnnotationSet& ann, int width, int height,
                     int radius = kDiskRadiusPx);

struct HarvestParams {
  int size = kSegmentationPatch;
  int stride = 256;
  int margin = kDiskRadiusPx;
};

/// Regular grid of windows (row-major). A window is Positive when a mitotic
/// point lies inside it after shrinking by `margin` on every side.
std::vector<PatchRecord> harvest_patches(Extent image, const AnnotationSet& ann,
                                         const HarvestParams& params = {});

/// One window of `size` centred on every annotated point: mitotic points give
/// Positive records, imposters (mimickers) Negative ones.
std::vector<PatchRecord> harvest_point_patches(Extent image, const AnnotationSet& ann,
                                               int size = kClassificationPatch);

struct Epoch {
  std::vector<PatchRecord> records;
  // Set when the pool had no positives; records is then empty.
  bool no_positives = false;
};

/// All positives plus min(N, round(ratio * P)) negatives drawn without
/// replacement, shuffled together.
Epoch epoch_sample(std::span<const PatchRecord> records, Rng& rng,
                   double negative_ratio = 1.0);

struct FoldAssignment {
  int k = 3;
  std::map<std::string, int, std::less<>> folds;

  std::vector<std::string> members(int fold) const;
  bool operator==(const FoldAssignment&) const = default;
};

FoldAssignment make_folds(std::span<const std::string> image_ids, int k = 3,
                          std::uint64_t seed = 0);

std::string folds_to_json(const FoldAssignment& folds);

// CSV with header `image_id,x0,y0,size,polarity`.
std::string patches_to_csv(std::span<const PatchRecord> records);
std::vector<PatchRecord> patches_from_csv(std::string_view text);

}  // namespace mitodet::dataset
