#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "mitodet/core/error.hpp"
#include "mitodet/core/raster.hpp"
#include "mitodet/dataset/dataset.hpp"

namespace mitodet::dataset {
namespace {

void check_size(int size) {
  if (size != kSegmentationPatch && size != kClassificationPatch) {
    fail(ErrorKind::kInvalidArgument, "patch size must be " + std::to_string(kSegmentationPatch) +
                                          " or " + std::to_string(kClassificationPatch) +
                                          ", got " + std::to_string(size));
  }
}

int parse_int(std::string_view field, std::size_t line, const char* name) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    fail(ErrorKind::kParse, "patch CSV line " + std::to_string(line) + ": bad " + name);
  }
  return v;
}

}  // namespace

std::string_view to_string(Polarity polarity) {
  return polarity == Polarity::kPositive ? "positive" : "negative";
}

std::vector<PatchRecord> harvest_patches(Extent image, const AnnotationSet& ann,
                                         const HarvestParams& params) {
  check_size(params.size);
  if (params.margin < 0 || 2 * params.margin >= params.size) {
    fail(ErrorKind::kInvalidArgument, "harvest: margin must be in [0, size / 2)");
  }
  const auto mitotic = ann.mitotic_points();
  std::vector<PatchRecord> out;
  for (const int y0 : window_origins(image.height, params.size, params.stride)) {
    for (const int x0 : window_origins(image.width, params.size, params.stride)) {
      const double lo_x = x0 + params.margin;
      const double hi_x = x0 + params.size - params.margin;
      const double lo_y = y0 + params.margin;
      const double hi_y = y0 + params.size - params.margin;
      const bool positive = std::any_of(mitotic.begin(), mitotic.end(), [&](const Point2& p) {
        return p.x >= lo_x && p.x < hi_x && p.y >= lo_y && p.y < hi_y;
      });
      out.push_back({ann.image_id(), x0, y0, params.size,
                     positive ? Polarity::kPositive : Polarity::kNegative});
    }
  }
  return out;
}

std::vector<PatchRecord> harvest_point_patches(Extent image, const AnnotationSet& ann, int size) {
  check_size(size);
  std::vector<PatchRecord> out;
  for (const auto& p : ann.points()) {
    // Centre pixel of an even window sits at origin + size / 2.
    const int x0 = static_cast<int>(std::floor(p.x)) - size / 2;
    const int y0 = static_cast<int>(std::floor(p.y)) - size / 2;
    if (x0 + size <= 0 || y0 + size <= 0 || x0 >= image.width || y0 >= image.height) {
      fail(ErrorKind::kData, "point patch outside image '" + ann.image_id() + "'");
    }
    out.push_back({ann.image_id(), x0, y0, size,
                   p.label == Label::kMitotic ? Polarity::kPositive : Polarity::kNegative});
  }
  return out;
}

std::string patches_to_csv(std::span<const PatchRecord> records) {
  std::ostringstream out;
  out << "image_id,x0,y0,size,polarity\n";
  for (const auto& r : records) {
    out << r.image_id << ',' << r.x0 << ',' << r.y0 << ',' << r.size << ','
        << to_string(r.polarity) << '\n';
  }
  return out.str();
}

std::vector<PatchRecord> patches_from_csv(std::string_view text) {
  std::vector<PatchRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1 && line == "image_id,x0,y0,size,polarity") continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 5 || fields[0].empty()) {
      fail(ErrorKind::kParse, "patch CSV line " + std::to_string(line_no) + ": expected 5 fields");
    }
    PatchRecord r;
    r.image_id = std::string(fields[0]);
    r.x0 = parse_int(fields[1], line_no, "x0");
    r.y0 = parse_int(fields[2], line_no, "y0");
    r.size = parse_int(fields[3], line_no, "size");
    if (fields[4] == "positive") {
      r.polarity = Polarity::kPositive;
    } else if (fields[4] == "negative") {
      r.polarity = Polarity::kNegative;
    } else {
      fail(ErrorKind::kParse, "patch CSV line " + std::to_string(line_no) + ": bad polarity");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mitodet::dataset
