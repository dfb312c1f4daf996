#include "mitodet/stain/stain_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

#include "mitodet/core/error.hpp"

namespace mitodet::stain {
namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 normalized(const Vec3& v, const char* name) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    fail(ErrorKind::kDegenerateStain, std::string("stain matrix: ") + name + " column is zero");
  }
  Vec3 out{v[0] / n, v[1] / n, v[2] / n};
  for (double c : out) {
    if (c < 0.0) {
      fail(ErrorKind::kDegenerateStain,
           std::string("stain matrix: ") + name + " column has a negative entry");
    }
  }
  return out;
}

Vec3 vec3_field(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array() || doc[key].size() != 3) {
    fail(ErrorKind::kParse, std::string("stain matrix: \"") + key + "\" must be a 3-array");
  }
  Vec3 v{};
  for (int i = 0; i < 3; ++i) {
    if (!doc[key][i].is_number()) {
      fail(ErrorKind::kParse, std::string("stain matrix: \"") + key + "\" has a non-number");
    }
    v[i] = doc[key][i].get<double>();
  }
  return v;
}

}  // namespace

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

double angle_degrees(const Vec3& a, const Vec3& b) {
  const double c = std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

StainMatrix::StainMatrix(const Vec3& hematoxylin, const Vec3& eosin)
    : columns_{normalized(hematoxylin, "hematoxylin"), normalized(eosin, "eosin")} {
  if (!(angle_degrees(columns_[0], columns_[1]) > kMinStainAngleDegrees)) {
    fail(ErrorKind::kDegenerateStain, "stain matrix: columns are parallel");
  }
  const double d = dot(columns_[0], columns_[1]);
  const double inv = 1.0 / (1.0 - d * d);
  for (int i = 0; i < 3; ++i) {
    pinv_[0][i] = (columns_[0][i] - d * columns_[1][i]) * inv;
    pinv_[1][i] = (columns_[1][i] - d * columns_[0][i]) * inv;
  }
}

StainMatrix StainMatrix::reference() {
  return StainMatrix({0.65, 0.70, 0.29}, {0.07, 0.99, 0.11});
}

std::string StainMatrix::to_json() const {
  char buf[256];
  const auto& h = columns_[0];
  const auto& e = columns_[1];
  std::snprintf(buf, sizeof(buf), "{\"h\":[%.9g,%.9g,%.9g],\"e\":[%.9g,%.9g,%.9g]}", h[0],
                h[1], h[2], e[0], e[1], e[2]);
  return buf;
}

StainMatrix StainMatrix::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("stain matrix: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::kParse, "stain matrix: expected an object");
  return StainMatrix(vec3_field(doc, "h"), vec3_field(doc, "e"));
}

}  // namespace mitodet::stain
