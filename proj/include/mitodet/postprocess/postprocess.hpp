#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mitodet/core/image.hpp"
#include "mitodet/infer/scorer.hpp"

namespace mitodet::postprocess {

// v >= thresh.
BinaryMask threshold(const ProbMap& map, double thresh);

// Offsets (dx, dy) with dx^2 + dy^2 <= r^2.
std::vector<std::pair<int, int>> disk_offsets(int radius);

// Pixels outside the image count as set for erosion and as unset for
// dilation, so components touching the border are not eaten from outside.
BinaryMask erode_disk(const BinaryMask& mask, int radius);
BinaryMask dilate_disk(const BinaryMask& mask, int radius);
BinaryMask open_disk(const BinaryMask& mask, int radius);

/// 8-connected labels; 0 is background and components are numbered from 1
/// in raster order of their first pixel.
struct Labels {
  int width = 0;
  int height = 0;
  int count = 0;
  std::vector<int> labels;

  int at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

Labels label_components(const BinaryMask& mask);

struct Candidate {
  Point2 centroid;
  int area = 0;
  double seg_score = 0.0;
};

struct ExtractParams {
  double thresh = 0.5;
  int open_radius = 2;
  int min_area = 60;
};

std::vector<Candidate> extract_candidates(const ProbMap& map, const ExtractParams& params = {});

struct RefineParams {
  int patch = 128;
  double accept = 0.5;
  bool tta = true;  // four flips; no sharpening for patches
  int jobs = 1;
};

/// Scores a patch centred on each candidate with every classifier; the mean
/// over classifiers and flips decides acceptance and becomes the score.
std::vector<Detection> refine(const ImageRGB& image, std::span<const Candidate> candidates,
                              std::span<const infer::ScorerPtr> classifiers,
                              const RefineParams& params = {});

}  // namespace mitodet::postprocess
