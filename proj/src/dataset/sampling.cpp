#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "mitodet/core/error.hpp"
#include "mitodet/dataset/dataset.hpp"

namespace mitodet::dataset {

Epoch epoch_sample(std::span<const PatchRecord> records, Rng& rng, double negative_ratio) {
  if (!(negative_ratio >= 0.0)) {
    fail(ErrorKind::kInvalidArgument, "epoch_sample: negative ratio must be >= 0");
  }
  std::vector<const PatchRecord*> positives;
  std::vector<const PatchRecord*> negatives;
  for (const auto& r : records) {
    (r.polarity == Polarity::kPositive ? positives : negatives).push_back(&r);
  }
  Epoch epoch;
  if (positives.empty()) {
    epoch.no_positives = true;
    return epoch;
  }

  const auto wanted = static_cast<std::size_t>(std::llround(negative_ratio * positives.size()));
  const std::size_t take = std::min(wanted, negatives.size());
  // Partial Fisher-Yates: the first `take` slots become a uniform subset.
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(negatives.size() - i));
    std::swap(negatives[i], negatives[j]);
  }

  epoch.records.reserve(positives.size() + take);
  for (const auto* r : positives) epoch.records.push_back(*r);
  for (std::size_t i = 0; i < take; ++i) epoch.records.push_back(*negatives[i]);
  rng.shuffle(std::span(epoch.records));
  return epoch;
}

std::vector<std::string> FoldAssignment::members(int fold) const {
  std::vector<std::string> out;
  for (const auto& [id, f] : folds) {
    if (f == fold) out.push_back(id);
  }
  return out;
}

FoldAssignment make_folds(std::span<const std::string> image_ids, int k, std::uint64_t seed) {
  if (k < 2) fail(ErrorKind::kInvalidArgument, "make_folds: k must be >= 2");
  if (image_ids.size() < static_cast<std::size_t>(k)) {
    fail(ErrorKind::kInvalidArgument, "make_folds: " + std::to_string(image_ids.size()) +
                                          " image ids cannot fill " + std::to_string(k) + " folds");
  }
  std::set<std::string_view> unique(image_ids.begin(), image_ids.end());
  if (unique.size() != image_ids.size()) {
    fail(ErrorKind::kInvalidArgument, "make_folds: duplicate image ids");
  }
  // Sort first so the assignment depends on the id set, not input order.
  std::vector<std::string> ids(image_ids.begin(), image_ids.end());
  std::sort(ids.begin(), ids.end());
  Rng rng(seed);
  rng.shuffle(std::span(ids));

  FoldAssignment out;
  out.k = k;
  for (std::size_t i = 0; i < ids.size(); ++i) out.folds[ids[i]] = static_cast<int>(i % k);
  return out;
}

std::string folds_to_json(const FoldAssignment& folds) {
  nlohmann::json doc;
  doc["k"] = folds.k;
  doc["folds"] = nlohmann::json::object();
  for (const auto& [id, f] : folds.folds) doc["folds"][id] = f;
  return doc.dump(2) + "\n";
}

}  // namespace mitodet::dataset
