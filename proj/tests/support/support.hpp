#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mitodet/core/annotations.hpp"
#include "mitodet/core/image.hpp"
#include "mitodet/core/rng.hpp"
#include "mitodet/stain/stain_matrix.hpp"

namespace testsupport {

using mitodet::BinaryMask;
using mitodet::ImageRGB;
using mitodet::Point2;
using mitodet::Rng;

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// ---- synthetic data ---------------------------------------------------------

// Rotates `v` by a random angle up to `max_deg` about a random axis, keeping
// entries non-negative.
mitodet::stain::Vec3 perturb_direction(const mitodet::stain::Vec3& v, double max_deg, Rng& rng);

/// Beer-Lambert image I = 255 exp(-(c_h h + c_e e)) from random per-pixel
/// concentrations: 10% near-white background, 25% single-stain pixels with
/// concentration in [0.5, 3] (dense enough that a stain with a weak channel,
/// like eosin in red, still clears an OD threshold of 0.15), the rest mixtures.
ImageRGB two_stain_image(int width, int height, const mitodet::stain::Vec3& h,
                         const mitodet::stain::Vec3& e, Rng& rng);

// Stained tissue with a dark hematoxylin blob of `radius` at every point.
// Background concentrations keep every channel's OD above 0.15, so stain
// estimation sees the whole tile and not just the blobs.
ImageRGB tissue_with_nuclei(int width, int height, const std::vector<Point2>& points, double radius,
                            Rng& rng);

// n points at least `border` from every edge and `min_dist` apart.
std::vector<Point2> plant_points(Rng& rng, int width, int height, int n, double border, double min_dist);

BinaryMask random_mask(Rng& rng, int width, int height, double density);

// ---- brute-force oracles ----------------------------------------------------

// Lattice points (x, y) in [0,w)x[0,h) with (x-cx)^2 + (y-cy)^2 <= r^2.
long long lattice_disk_count(double cx, double cy, double r, int w, int h);

// Labels by BFS flood fill, 8-connected, numbered in raster order of the
// first pixel of each component.
std::vector<int> flood_fill_labels(const BinaryMask& mask, int* count);

// Opening straight from the set definitions (outside counts as set for
// erosion and unset for dilation).
BinaryMask brute_open(const BinaryMask& mask, int radius);

struct BruteMatch {
  int tp = 0;
  double total = 0.0;
};

// Exhaustive search over one-to-one assignments: most pairs within
// `radius`, then least summed distance.
BruteMatch brute_match(const std::vector<Point2>& dets, const std::vector<Point2>& gts, double radius);

// Components of an image as (area, centroid), in raster order, from the
// flood-fill labels.
std::vector<std::pair<int, Point2>> brute_components(const BinaryMask& mask);

}  // namespace testsupport
