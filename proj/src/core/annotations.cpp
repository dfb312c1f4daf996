#include "mitodet/core/annotations.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include <json.hpp>

#include "mitodet/core/error.hpp"
#include "mitodet/core/fs.hpp"

namespace mitodet {

using nlohmann::json;

std::string_view to_string(Label label) {
  return label == Label::kMitotic ? "mitotic" : "imposter";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "mitotic") return Label::kMitotic;
  if (text == "imposter") return Label::kImposter;
  return std::nullopt;
}

AnnotationSet::AnnotationSet(std::string image_id, std::vector<PointAnnotation> points,
                             double mpp)
    : image_id_(std::move(image_id)), points_(std::move(points)), mpp_(mpp) {
  if (image_id_.empty()) fail(ErrorKind::kData, "annotation set: empty image id");
  if (!(mpp_ > 0.0) || !std::isfinite(mpp_)) {
    fail(ErrorKind::kData, "annotation set '" + image_id_ + "': mpp must be positive");
  }
  std::set<std::tuple<double, double, int>> seen;
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.y < 0.0) {
      fail(ErrorKind::kData, "annotation set '" + image_id_ + "': invalid point (" +
                                 std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    }
    if (!seen.emplace(p.x, p.y, static_cast<int>(p.label)).second) {
      fail(ErrorKind::kData, "annotation set '" + image_id_ + "': duplicate point (" +
                                 std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    }
  }
}

std::vector<Point2> AnnotationSet::mitotic_points() const {
  std::vector<Point2> out;
  for (const auto& p : points_) {
    if (p.label == Label::kMitotic) out.push_back({p.x, p.y});
  }
  return out;
}

void AnnotationSet::check_bounds(Extent extent) const {
  for (const auto& p : points_) {
    if (p.x >= extent.width || p.y >= extent.height) {
      fail(ErrorKind::kData, "annotation set '" + image_id_ + "': point (" +
                                 std::to_string(p.x) + ", " + std::to_string(p.y) +
                                 ") outside " + std::to_string(extent.width) + "x" +
                                 std::to_string(extent.height) + " image");
    }
  }
}

namespace {

double number_field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    fail(ErrorKind::kParse, where + ": missing numeric field '" + key + "'");
  }
  return it->get<double>();
}

}  // namespace

std::vector<AnnotationSet> parse_annotations(std::string_view json_text,
                                             const ImageExtents& extents) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("annotations: malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("images") || !doc["images"].is_array()) {
    fail(ErrorKind::kParse, "annotations: expected an object with an \"images\" array");
  }

  std::vector<AnnotationSet> sets;
  std::set<std::string, std::less<>> ids;
  for (const auto& entry : doc["images"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
      fail(ErrorKind::kParse, "annotations: image entry without string \"id\"");
    }
    std::string id = entry["id"].get<std::string>();
    const std::string where = "annotations: image '" + id + "'";
    if (!ids.insert(id).second) fail(ErrorKind::kParse, where + ": duplicate image id");

    double mpp = kDefaultMpp;
    if (entry.contains("mpp")) mpp = number_field(entry, "mpp", where);

    std::vector<PointAnnotation> points;
    if (entry.contains("points")) {
      if (!entry["points"].is_array()) fail(ErrorKind::kParse, where + ": \"points\" not an array");
      for (const auto& p : entry["points"]) {
        if (!p.is_object()) fail(ErrorKind::kParse, where + ": point is not an object");
        PointAnnotation point;
        point.x = number_field(p, "x", where);
        point.y = number_field(p, "y", where);
        const auto label_it = p.find("label");
        if (label_it == p.end() || !label_it->is_string()) {
          fail(ErrorKind::kParse, where + ": point without string \"label\"");
        }
        const auto text = label_it->get<std::string>();
        const auto label = parse_label(text);
        if (!label) fail(ErrorKind::kParse, where + ": unknown label \"" + text + "\"");
        point.label = *label;
        points.push_back(point);
      }
    }
    AnnotationSet set(std::move(id), std::move(points), mpp);
    if (const auto it = extents.find(set.image_id()); it != extents.end()) {
      set.check_bounds(it->second);
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

std::vector<AnnotationSet> load_annotations(const std::filesystem::path& path,
                                            const ImageExtents& extents) {
  return parse_annotations(read_text(path), extents);
}

std::string serialize_annotations(std::span<const AnnotationSet> sets) {
  json images = json::array();
  for (const auto& set : sets) {
    json points = json::array();
    for (const auto& p : set.points()) {
      points.push_back({{"x", p.x}, {"y", p.y}, {"label", std::string(to_string(p.label))}});
    }
    images.push_back({{"id", set.image_id()}, {"mpp", set.mpp()}, {"points", points}});
  }
  return json{{"images", images}}.dump(2) + "\n";
}

void save_annotations(const std::filesystem::path& path, std::span<const AnnotationSet> sets) {
  write_file_atomic(path, serialize_annotations(sets));
}

}  // namespace mitodet
