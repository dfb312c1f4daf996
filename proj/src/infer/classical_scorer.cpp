#include <algorithm>
#include <cmath>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/core/filter.hpp"
#include "mitodet/infer/scorer.hpp"
#include "mitodet/stain/stain.hpp"

namespace mitodet::infer {
namespace {

constexpr double kNormPercentile = 99.0;
constexpr double kSmoothingPx = 2.0;

float percentile(std::vector<float> values, double pct) {
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const float a = values[lo];
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= values.size()) return a;
  const float b = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return static_cast<float>(a + frac * (b - a));
}

class ClassicalScorer final : public SegmentationScorer {
 public:
  const std::string& id() const override { return id_; }

 protected:
  ProbMap score_tile(const Tile& tile) const override {
    const int w = tile.image.width();
    const int h = tile.image.height();
    const stain::OdField od = stain::rgb_to_od(tile.image);
    stain::StainMatrix m = stain::StainMatrix::reference();
    try {
      m = stain::estimate_stain_matrix(od);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInsufficientTissue && e.kind() != ErrorKind::kDegenerateStain) {
        throw;
      }
    }
    std::vector<float> hema = stain::deconvolve(od, m).channel(0);
    const float scale = percentile(hema, kNormPercentile);
    if (!(scale > 1e-6f)) return ProbMap::filled(w, h, 0.0f);
    for (auto& v : hema) v /= scale;
    auto smooth = gaussian_blur_plane(hema, w, h, kSmoothingPx);
    for (auto& v : smooth) v = std::clamp(v, 0.0f, 1.0f);
    return ProbMap(w, h, std::move(smooth));
  }

 private:
  std::string id_ = "classical";
};

}  // namespace

ScorerPtr make_classical_scorer() { return std::make_shared<ClassicalScorer>(); }

}  // namespace mitodet::infer
