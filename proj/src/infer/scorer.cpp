#include "mitodet/infer/scorer.hpp"

#include <algorithm>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/core/parallel.hpp"

namespace mitodet::infer {

std::vector<ProbMap> Scorer::segment(std::span<const Tile>) const {
  fail(ErrorKind::kScorer, "scorer '" + id() + "' does not support segmentation");
}

std::vector<double> Scorer::classify(std::span<const Tile>) const {
  fail(ErrorKind::kScorer, "scorer '" + id() + "' does not support classification");
}

std::vector<ProbMap> SegmentationScorer::segment(std::span<const Tile> tiles) const {
  std::vector<ProbMap> out;
  out.reserve(tiles.size());
  for (const auto& t : tiles) out.push_back(score_tile(t));
  return out;
}

std::vector<double> ClassificationScorer::classify(std::span<const Tile> tiles) const {
  std::vector<double> out;
  out.reserve(tiles.size());
  for (const auto& t : tiles) out.push_back(score_patch(t));
  return out;
}

std::vector<double> classify_all(const Scorer& scorer, std::span<const Tile> patches, int jobs) {
  if (scorer.mode() != ScorerMode::kClassification) {
    fail(ErrorKind::kInvalidArgument, "scorer '" + scorer.id() + "' is not a classifier");
  }
  std::vector<double> scores(patches.size());
  if (patches.empty()) return scores;
  const std::size_t batch = scorer.batch_size() == 0 ? patches.size() : scorer.batch_size();
  const std::size_t chunks = (patches.size() + batch - 1) / batch;
  parallel_for(chunks, scorer.parallel_safe() ? jobs : 1, [&](std::size_t c) {
    const std::size_t begin = c * batch;
    const std::size_t count = std::min(batch, patches.size() - begin);
    std::vector<double> got;
    try {
      got = scorer.classify(patches.subspan(begin, count));
    } catch (const std::exception& e) {
      fail(ErrorKind::kScorer, "classifier '" + scorer.id() + "' failed on patch '" +
                                   patches[begin].id + "': " + e.what());
    }
    if (got.size() != count) {
      fail(ErrorKind::kScorer, "classifier '" + scorer.id() + "' returned " +
                                   std::to_string(got.size()) + " scores for " +
                                   std::to_string(count) + " patches");
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (!(got[i] >= 0.0 && got[i] <= 1.0)) {
        fail(ErrorKind::kScorer, "classifier '" + scorer.id() + "' scored patch '" +
                                     patches[begin + i].id + "' outside [0, 1]");
      }
      scores[begin + i] = got[i];
    }
  });
  return scores;
}

namespace {

class ConstantSegmenter final : public SegmentationScorer {
 public:
  explicit ConstantSegmenter(float value)
      : value_(value), id_("constant(" + std::to_string(value) + ")") {}
  const std::string& id() const override { return id_; }

 protected:
  ProbMap score_tile(const Tile& tile) const override {
    return ProbMap::filled(tile.image.width(), tile.image.height(), value_);
  }

 private:
  float value_;
  std::string id_;
};

class ConstantClassifier final : public ClassificationScorer {
 public:
  explicit ConstantClassifier(double value)
      : value_(value), id_("constant(" + std::to_string(value) + ")") {}
  const std::string& id() const override { return id_; }

 protected:
  double score_patch(const Tile&) const override { return value_; }

 private:
  double value_;
  std::string id_;
};

}  // namespace

ScorerPtr make_constant_scorer(ScorerMode mode, double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    fail(ErrorKind::kInvalidArgument, "constant scorer: value outside [0, 1]");
  }
  if (mode == ScorerMode::kSegmentation) {
    return std::make_shared<ConstantSegmenter>(static_cast<float>(value));
  }
  return std::make_shared<ConstantClassifier>(value);
}

}  // namespace mitodet::infer
