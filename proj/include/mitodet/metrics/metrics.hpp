#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mitodet/core/image.hpp"

namespace mitodet::metrics {

inline constexpr double kDefaultRadiusPx = 30.0;

/// Minimum-cost perfect assignment on an n x n cost matrix (row-major).
/// Returns the column assigned to each row.
std::vector<int> hungarian(std::span<const double> cost, int n);

struct MatchPair {
  int det = 0;
  int gt = 0;
  double distance = 0.0;

  bool operator==(const MatchPair&) const = default;
};

struct MatchResult {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  std::vector<MatchPair> pairs;  // sorted by detection index

  double total_distance() const;
};

enum class MatchMethod { kHungarian, kGreedy };

/// One-to-one matching of detections to points within `radius_px`.
/// Hungarian maximizes the number of pairs, then minimizes their summed
/// distance. Greedy takes detections by descending score (ties by index) and
/// gives each the nearest free point.
MatchResult match(std::span<const Detection> dets, std::span<const Point2> gts,
                  double radius_px = kDefaultRadiusPx, MatchMethod method = MatchMethod::kHungarian);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 0/0 is taken as 0 throughout.
Prf prf(long long tp, long long fp, long long fn);
double f1_score(double precision, double recall);

struct ImageScore {
  std::string image_id;
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

struct Report {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  Prf scores;
  double radius_px = kDefaultRadiusPx;
  std::vector<ImageScore> per_image;  // sorted by image id

  std::string to_json() const;
  std::string to_table() const;
};

struct ImageDetections {
  std::string image_id;
  std::vector<Detection> detections;
};

struct ImageTruth {
  std::string image_id;
  std::vector<Point2> points;
};

/// Micro-averaged report. Images without predictions have zero detections;
/// predictions for images absent from the truth are all false positives.
Report evaluate_run(std::span<const ImageDetections> dets, std::span<const ImageTruth> gts,
                    double radius_px = kDefaultRadiusPx, MatchMethod method = MatchMethod::kHungarian);

// Report built from pooled counts alone.
Report report_from_counts(long long tp, long long fp, long long fn);

// |a & b| / |a | b|, 1 when both are empty.
double jaccard(const BinaryMask& a, const BinaryMask& b);

}  // namespace mitodet::metrics
