#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mitodet/core/image.hpp"

namespace mitodet {

enum class Label { kMitotic, kImposter };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

struct PointAnnotation {
  double x = 0.0;
  double y = 0.0;
  Label label = Label::kMitotic;

  bool operator==(const PointAnnotation&) const = default;
};

/// Ground-truth points for one image.
class AnnotationSet {
 public:
  AnnotationSet(std::string image_id, std::vector<PointAnnotation> points,
                double mpp = kDefaultMpp);

  const std::string& image_id() const noexcept { return image_id_; }
  const std::vector<PointAnnotation>& points() const noexcept { return points_; }
  double mpp() const noexcept { return mpp_; }

  std::vector<Point2> mitotic_points() const;

  // Throws kData if any point lies outside [0, width) x [0, height).
  void check_bounds(Extent extent) const;

  bool operator==(const AnnotationSet&) const = default;

 private:
  std::string image_id_;
  std::vector<PointAnnotation> points_;
  double mpp_;
};

using ImageExtents = std::map<std::string, Extent, std::less<>>;

// Out-of-range coordinates are only rejected for ids present in `extents`.
std::vector<AnnotationSet> parse_annotations(std::string_view json_text,
                                             const ImageExtents& extents = {});
std::vector<AnnotationSet> load_annotations(const std::filesystem::path& path,
                                            const ImageExtents& extents = {});

std::string serialize_annotations(std::span<const AnnotationSet> sets);
void save_annotations(const std::filesystem::path& path,
                      std::span<const AnnotationSet> sets);

}  // namespace mitodet
