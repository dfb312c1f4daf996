#include "mitodet/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "mitodet/core/error.hpp"

namespace mitodet::cli {
namespace {

struct Row {
  int line;
  std::vector<std::string_view> fields;
};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

// Data rows after checking the header; blank lines are skipped.
std::vector<Row> rows(std::string_view text, std::string_view header, const std::string& source) {
  std::vector<Row> out;
  bool seen_header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (!seen_header) {
      if (line != header) {
        fail(ErrorKind::kParse, source + " line " + std::to_string(line_no) + ": expected header '" +
                                    std::string(header) + "'");
      }
      seen_header = true;
      continue;
    }
    out.push_back({line_no, split(line)});
  }
  if (!seen_header) fail(ErrorKind::kParse, source + ": missing header '" + std::string(header) + "'");
  return out;
}

[[noreturn]] void row_error(const std::string& source, int line, const std::string& what) {
  fail(ErrorKind::kParse, source + " line " + std::to_string(line) + ": " + what);
}

double number(std::string_view f, const std::string& source, int line, const char* name) {
  double v = 0.0;
  const auto r = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || r.ec != std::errc() || r.ptr != f.data() + f.size() || !std::isfinite(v)) {
    row_error(source, line, std::string("invalid ") + name + " '" + std::string(f) + "'");
  }
  return v;
}

template <typename Group, typename Item>
std::vector<Group> group_rows(std::vector<std::pair<std::string, Item>> items) {
  std::vector<Group> out;
  std::map<std::string, std::size_t> index;
  for (auto& [id, item] : items) {
    auto [it, inserted] = index.emplace(id, out.size());
    if (inserted) out.push_back(Group{id, {}});
    auto& group = out[it->second];
    if constexpr (requires { group.detections; }) {
      group.detections.push_back(std::move(item));
    } else {
      group.candidates.push_back(std::move(item));
    }
  }
  return out;
}

}  // namespace

std::string detections_to_csv(std::span<const metrics::ImageDetections> images) {
  std::string out = "image_id,x,y,score\n";
  char buf[128];
  for (const auto& img : images) {
    for (const auto& d : img.detections) {
      std::snprintf(buf, sizeof(buf), ",%.3f,%.3f,%.4f\n", d.x, d.y, d.score);
      out += img.image_id + buf;
    }
  }
  return out;
}

std::vector<metrics::ImageDetections> detections_from_csv(std::string_view text, const std::string& source) {
  std::vector<std::pair<std::string, Detection>> items;
  for (const auto& row : rows(text, "image_id,x,y,score", source)) {
    if (row.fields.size() != 4) {
      row_error(source, row.line, "expected 4 fields, got " + std::to_string(row.fields.size()));
    }
    if (row.fields[0].empty()) row_error(source, row.line, "empty image_id");
    const double x = number(row.fields[1], source, row.line, "x");
    const double y = number(row.fields[2], source, row.line, "y");
    const double s = number(row.fields[3], source, row.line, "score");
    if (x < 0 || y < 0) row_error(source, row.line, "negative coordinate");
    if (s < 0 || s > 1) row_error(source, row.line, "score outside [0, 1]");
    items.emplace_back(std::string(row.fields[0]), Detection(x, y, s));
  }
  return group_rows<metrics::ImageDetections>(std::move(items));
}

std::string candidates_to_csv(std::span<const ImageCandidates> images) {
  std::string out = "image_id,x,y,area,seg_score\n";
  char buf[128];
  for (const auto& img : images) {
    for (const auto& c : img.candidates) {
      std::snprintf(buf, sizeof(buf), ",%.3f,%.3f,%d,%.4f\n", c.centroid.x, c.centroid.y, c.area, c.seg_score);
      out += img.image_id + buf;
    }
  }
  return out;
}

std::vector<ImageCandidates> candidates_from_csv(std::string_view text, const std::string& source) {
  std::vector<std::pair<std::string, postprocess::Candidate>> items;
  for (const auto& row : rows(text, "image_id,x,y,area,seg_score", source)) {
    if (row.fields.size() != 5) {
      row_error(source, row.line, "expected 5 fields, got " + std::to_string(row.fields.size()));
    }
    if (row.fields[0].empty()) row_error(source, row.line, "empty image_id");
    postprocess::Candidate c;
    c.centroid.x = number(row.fields[1], source, row.line, "x");
    c.centroid.y = number(row.fields[2], source, row.line, "y");
    const double area = number(row.fields[3], source, row.line, "area");
    c.seg_score = number(row.fields[4], source, row.line, "seg_score");
    if (c.centroid.x < 0 || c.centroid.y < 0) row_error(source, row.line, "negative coordinate");
    if (area < 1 || area != std::floor(area)) row_error(source, row.line, "area must be a positive integer");
    if (c.seg_score < 0 || c.seg_score > 1) row_error(source, row.line, "seg_score outside [0, 1]");
    c.area = static_cast<int>(area);
    items.emplace_back(std::string(row.fields[0]), c);
  }
  return group_rows<ImageCandidates>(std::move(items));
}

}  // namespace mitodet::cli
