#include <cstdio>
#include <set>
#include <string>

#include <json.hpp>

#include "mitodet/core/error.hpp"
#include "mitodet/metrics/metrics.hpp"

namespace mitodet::metrics {
namespace {

double ratio(long long num, long long den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double f1_score(double precision, double recall) {
  const double s = precision + recall;
  return s == 0.0 ? 0.0 : 2.0 * precision * recall / s;
}

Prf prf(long long tp, long long fp, long long fn) {
  if (tp < 0 || fp < 0 || fn < 0) fail(ErrorKind::kInvalidArgument, "prf: negative count");
  Prf r;
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

Report report_from_counts(long long tp, long long fp, long long fn) {
  Report r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.scores = prf(tp, fp, fn);
  return r;
}

Report evaluate_run(std::span<const ImageDetections> dets, std::span<const ImageTruth> gts,
                    double radius_px, MatchMethod method) {
  std::map<std::string, const ImageDetections*> by_det;
  for (const auto& d : dets) {
    if (!by_det.emplace(d.image_id, &d).second) {
      fail(ErrorKind::kData, "duplicate image id in detections: " + d.image_id);
    }
  }
  std::map<std::string, const ImageTruth*> by_gt;
  for (const auto& g : gts) {
    if (!by_gt.emplace(g.image_id, &g).second) {
      fail(ErrorKind::kData, "duplicate image id in ground truth: " + g.image_id);
    }
  }
  std::set<std::string> ids;
  for (const auto& [id, _] : by_det) ids.insert(id);
  for (const auto& [id, _] : by_gt) ids.insert(id);

  Report report;
  report.radius_px = radius_px;
  for (const auto& id : ids) {
    const auto d = by_det.find(id);
    const auto g = by_gt.find(id);
    const std::span<const Detection> ds =
        d == by_det.end() ? std::span<const Detection>{} : std::span<const Detection>(d->second->detections);
    const std::span<const Point2> gs =
        g == by_gt.end() ? std::span<const Point2>{} : std::span<const Point2>(g->second->points);
    const MatchResult m = match(ds, gs, radius_px, method);
    report.tp += m.tp;
    report.fp += m.fp;
    report.fn += m.fn;
    report.per_image.push_back({id, m.tp, m.fp, m.fn});
  }
  report.scores = prf(report.tp, report.fp, report.fn);
  return report;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["precision"] = scores.precision;
  j["recall"] = scores.recall;
  j["f1"] = scores.f1;
  j["tp"] = tp;
  j["fp"] = fp;
  j["fn"] = fn;
  j["radius_px"] = radius_px;
  j["per_image"] = nlohmann::ordered_json::array();
  for (const auto& s : per_image) {
    const Prf p = prf(s.tp, s.fp, s.fn);
    j["per_image"].push_back({{"image_id", s.image_id},
                              {"tp", s.tp},
                              {"fp", s.fp},
                              {"fn", s.fn},
                              {"precision", p.precision},
                              {"recall", p.recall},
                              {"f1", p.f1}});
  }
  return j.dump(2) + "\n";
}

std::string Report::to_table() const {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %6s %6s %6s %9s %9s %9s\n", "image", "tp", "fp", "fn",
                "precision", "recall", "f1");
  out += line;
  auto row = [&](const std::string& name, long long t, long long f, long long n) {
    const Prf p = prf(t, f, n);
    std::snprintf(line, sizeof(line), "%-24s %6lld %6lld %6lld %9.4f %9.4f %9.4f\n", name.c_str(), t,
                  f, n, p.precision, p.recall, p.f1);
    out += line;
  };
  for (const auto& s : per_image) row(s.image_id, s.tp, s.fp, s.fn);
  row("ALL", tp, fp, fn);
  return out;
}

}  // namespace mitodet::metrics
