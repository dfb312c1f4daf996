#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include "mitodet/augment/augment.hpp"
#include "mitodet/core/error.hpp"

namespace mitodet::augment {
namespace {

struct KindInfo {
  AugmentKind kind;
  std::string_view name;
  ParamLimits limits;
  bool geometric;
};

constexpr std::array<KindInfo, 14> kKinds{{
    {AugmentKind::kFlipH, "flip_h", {0.0, 0.0}, true},
    {AugmentKind::kFlipV, "flip_v", {0.0, 0.0}, true},
    {AugmentKind::kRotate90, "rotate90", {0.0, 3.0}, true},
    {AugmentKind::kRotateFree, "rotate_free", {-180.0, 180.0}, true},
    {AugmentKind::kShear, "shear", {-45.0, 45.0}, true},
    {AugmentKind::kZoom, "zoom", {0.25, 4.0}, true},
    {AugmentKind::kElastic, "elastic", {0.0, 100.0}, true},
    {AugmentKind::kBrightness, "brightness", {-255.0, 255.0}, false},
    {AugmentKind::kContrast, "contrast", {0.0, 4.0}, false},
    {AugmentKind::kBlur, "blur", {0.0, 10.0}, false},
    {AugmentKind::kSharpen, "sharpen", {0.0, 5.0}, false},
    {AugmentKind::kColorJitter, "color_jitter", {-255.0, 255.0}, false},
    {AugmentKind::kSaturation, "saturation", {0.0, 4.0}, false},
    {AugmentKind::kStain, "stain", {0.0, 1.0}, false},
}};

const KindInfo& info(AugmentKind kind) {
  return kKinds[static_cast<std::size_t>(kind)];
}

// "FlipH", "flip_h" and "fliph" all name the same kind.
std::string canonical(std::string_view name) {
  std::string out;
  for (const char c : name) {
    if (c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string_view to_string(AugmentKind kind) { return info(kind).name; }

std::optional<AugmentKind> parse_kind(std::string_view name) {
  const auto key = canonical(name);
  for (const auto& k : kKinds) {
    if (canonical(k.name) == key) return k.kind;
  }
  return std::nullopt;
}

bool is_geometric(AugmentKind kind) { return info(kind).geometric; }

ParamLimits limits_for(AugmentKind kind) { return info(kind).limits; }

AugmentSpec::AugmentSpec(std::vector<AugmentStep> steps) : steps_(std::move(steps)) {
  for (const auto& s : steps_) {
    const auto name = std::string(to_string(s.kind));
    if (!(s.p >= 0.0 && s.p <= 1.0)) {
      fail(ErrorKind::kInvalidArgument, "augment " + name + ": probability outside [0, 1]");
    }
    if (!std::isfinite(s.min) || !std::isfinite(s.max) || s.min > s.max) {
      fail(ErrorKind::kInvalidArgument, "augment " + name + ": empty parameter range");
    }
    const auto lim = limits_for(s.kind);
    if (s.min < lim.lo || s.max > lim.hi) {
      fail(ErrorKind::kInvalidArgument, "augment " + name + ": range [" + std::to_string(s.min) +
                                            ", " + std::to_string(s.max) + "] outside [" +
                                            std::to_string(lim.lo) + ", " +
                                            std::to_string(lim.hi) + "]");
    }
    if (s.kind == AugmentKind::kRotate90 && std::ceil(s.min) > std::floor(s.max)) {
      fail(ErrorKind::kInvalidArgument, "augment rotate90: range holds no whole quarter turn");
    }
  }
}

AugmentSpec AugmentSpec::defaults() {
  return AugmentSpec({
      {AugmentKind::kFlipH, 0.5, 0.0, 0.0},
      {AugmentKind::kFlipV, 0.5, 0.0, 0.0},
      {AugmentKind::kRotate90, 0.5, 0.0, 3.0},
      {AugmentKind::kRotateFree, 0.3, -15.0, 15.0},
      {AugmentKind::kShear, 0.3, -10.0, 10.0},
      {AugmentKind::kZoom, 0.3, 0.8, 1.2},
      {AugmentKind::kElastic, 0.2, 0.0, 34.0},
      {AugmentKind::kBrightness, 0.3, -25.0, 25.0},
      {AugmentKind::kContrast, 0.3, 0.75, 1.25},
      {AugmentKind::kBlur, 0.2, 0.0, 2.0},
      {AugmentKind::kSharpen, 0.2, 0.0, 1.0},
      {AugmentKind::kColorJitter, 0.3, -10.0, 10.0},
      {AugmentKind::kSaturation, 0.3, 0.75, 1.25},
      {AugmentKind::kStain, 0.5, 0.0, 0.2},
  });
}

}  // namespace mitodet::augment
