#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/metrics/metrics.hpp"

namespace mitodet::metrics {
namespace {

MatchResult finish(std::vector<MatchPair> pairs, std::size_t n_det, std::size_t n_gt) {
  std::sort(pairs.begin(), pairs.end(),
            [](const MatchPair& a, const MatchPair& b) { return a.det < b.det; });
  MatchResult r;
  r.tp = static_cast<int>(pairs.size());
  r.fp = static_cast<int>(n_det) - r.tp;
  r.fn = static_cast<int>(n_gt) - r.tp;
  r.pairs = std::move(pairs);
  return r;
}

MatchResult match_hungarian(const std::vector<double>& dist, int nd, int ng, double radius) {
  // Feasible pairs cost d - big, infeasible 0. Since big exceeds the summed
  // distance of any matching, more feasible pairs always win, and among
  // equal cardinalities the smaller total distance wins.
  const int n = std::max(nd, ng);
  const double big = radius * (std::min(nd, ng) + 1) + 1.0;
  std::vector<double> cost(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < ng; ++j) {
      const double d = dist[static_cast<std::size_t>(i) * ng + j];
      if (d <= radius) cost[static_cast<std::size_t>(i) * n + j] = d - big;
    }
  }
  const std::vector<int> assign = hungarian(cost, n);
  std::vector<MatchPair> pairs;
  for (int i = 0; i < nd; ++i) {
    const int j = assign[i];
    if (j < ng) {
      const double d = dist[static_cast<std::size_t>(i) * ng + j];
      if (d <= radius) pairs.push_back({i, j, d});
    }
  }
  return finish(std::move(pairs), nd, ng);
}

MatchResult match_greedy(std::span<const Detection> dets, const std::vector<double>& dist, int ng,
                         double radius) {
  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dets[a].score > dets[b].score; });
  std::vector<char> taken(ng, 0);
  std::vector<MatchPair> pairs;
  for (const int i : order) {
    int best = -1;
    for (int j = 0; j < ng; ++j) {
      const double d = dist[static_cast<std::size_t>(i) * ng + j];
      if (taken[j] || d > radius) continue;
      if (best < 0 || d < dist[static_cast<std::size_t>(i) * ng + best]) best = j;
    }
    if (best >= 0) {
      taken[best] = 1;
      pairs.push_back({i, best, dist[static_cast<std::size_t>(i) * ng + best]});
    }
  }
  return finish(std::move(pairs), dets.size(), ng);
}

}  // namespace

double MatchResult::total_distance() const {
  double s = 0.0;
  for (const auto& p : pairs) s += p.distance;
  return s;
}

MatchResult match(std::span<const Detection> dets, std::span<const Point2> gts, double radius_px,
                  MatchMethod method) {
  if (!(radius_px > 0.0) || !std::isfinite(radius_px)) {
    fail(ErrorKind::kInvalidArgument, "match: radius must be positive");
  }
  const int nd = static_cast<int>(dets.size());
  const int ng = static_cast<int>(gts.size());
  std::vector<double> dist(static_cast<std::size_t>(nd) * ng);
  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < ng; ++j) {
      dist[static_cast<std::size_t>(i) * ng + j] = std::hypot(dets[i].x - gts[j].x, dets[i].y - gts[j].y);
    }
  }
  if (nd == 0 || ng == 0) return finish({}, nd, ng);
  return method == MatchMethod::kGreedy ? match_greedy(dets, dist, ng, radius_px)
                                        : match_hungarian(dist, nd, ng, radius_px);
}

}  // namespace mitodet::metrics
