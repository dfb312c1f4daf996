#include <algorithm>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/postprocess/postprocess.hpp"

namespace mitodet::postprocess {

std::vector<Candidate> extract_candidates(const ProbMap& map, const ExtractParams& params) {
  if (!(params.thresh > 0.0 && params.thresh < 1.0)) {
    fail(ErrorKind::kInvalidArgument, "extract_candidates: thresh must lie in (0, 1)");
  }
  if (params.min_area < 0) fail(ErrorKind::kInvalidArgument, "extract_candidates: negative min_area");

  const BinaryMask opened = open_disk(threshold(map, params.thresh), params.open_radius);
  const Labels labels = label_components(opened);

  struct Acc {
    long long area = 0;
    double sx = 0.0, sy = 0.0, sv = 0.0;
  };
  std::vector<Acc> acc(labels.count + 1);
  const auto values = map.values();
  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * labels.width + x;
      const int l = labels.labels[i];
      if (l == 0) continue;
      Acc& a = acc[l];
      ++a.area;
      a.sx += x;
      a.sy += y;
      a.sv += values[i];
    }
  }

  std::vector<Candidate> out;
  for (int l = 1; l <= labels.count; ++l) {
    const Acc& a = acc[l];
    if (a.area < params.min_area) continue;
    const double n = static_cast<double>(a.area);
    out.push_back({{a.sx / n, a.sy / n}, static_cast<int>(a.area), std::clamp(a.sv / n, 0.0, 1.0)});
  }
  return out;
}

}  // namespace mitodet::postprocess
