#include "mitodet/infer/predict.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "mitodet/core/error.hpp"
#include "mitodet/core/parallel.hpp"
#include "mitodet/core/raster.hpp"
#include "mitodet/infer/tta.hpp"

namespace mitodet::infer {
namespace {

// Number of windows covering each coordinate along one axis.
std::vector<int> axis_coverage(const std::vector<int>& origins, int tile, int extent) {
  std::vector<int> cover(extent, 0);
  for (const int o : origins) {
    for (int i = std::max(o, 0); i < std::min(o + tile, extent); ++i) ++cover[i];
  }
  return cover;
}

std::string tile_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "t%05zu", index);
  return buf;
}

void add_into(std::vector<double>& acc, const ProbMap& map) {
  const auto v = map.values();
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}

}  // namespace

ProbMap run_tiled(const ImageRGB& image, const Scorer& scorer, const TilePlan& plan, int jobs,
                  const TileFrame& base) {
  if (scorer.mode() != ScorerMode::kSegmentation) {
    fail(ErrorKind::kInvalidArgument, "run_tiled: scorer '" + scorer.id() + "' is not a segmenter");
  }
  if (plan.width != image.width() || plan.height != image.height()) {
    fail(ErrorKind::kInvalidArgument, "run_tiled: plan does not match image geometry");
  }
  const int w = image.width();
  const int h = image.height();
  const std::size_t n = plan.windows.size();
  const std::size_t batch = scorer.batch_size() == 0 ? n : scorer.batch_size();
  const std::size_t chunks = (n + batch - 1) / batch;

  std::vector<double> sum(static_cast<std::size_t>(w) * h, 0.0);
  std::mutex merge_mutex;
  std::size_t next_merge = 0;
  std::map<std::size_t, std::vector<ProbMap>> pending;

  auto merge = [&](std::size_t chunk, const std::vector<ProbMap>& maps) {
    for (std::size_t k = 0; k < maps.size(); ++k) {
      const Window& win = plan.windows[chunk * batch + k];
      const auto values = maps[k].values();
      const int x_end = std::min(win.x0 + win.width, w);
      const int y_end = std::min(win.y0 + win.height, h);
      for (int y = win.y0; y < y_end; ++y) {
        const float* src = values.data() + static_cast<std::size_t>(y - win.y0) * win.width;
        double* dst = sum.data() + static_cast<std::size_t>(y) * w;
        for (int x = win.x0; x < x_end; ++x) dst[x] += src[x - win.x0];
      }
    }
  };

  parallel_for(chunks, scorer.parallel_safe() ? jobs : 1, [&](std::size_t chunk) {
    const std::size_t begin = chunk * batch;
    const std::size_t count = std::min(batch, n - begin);
    std::vector<Tile> tiles;
    tiles.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      const Window& win = plan.windows[begin + k];
      tiles.push_back({tile_id(begin + k), crop_reflect(image, win.x0, win.y0, win.width, win.height),
                       base.shifted(win.x0, win.y0)});
    }
    const Window& first = plan.windows[begin];
    const std::string where = "tile (" + std::to_string(first.x0) + ", " +
                              std::to_string(first.y0) + ")" +
                              (count > 1 ? " and " + std::to_string(count - 1) + " more" : "");
    std::vector<ProbMap> maps;
    try {
      maps = scorer.segment(tiles);
    } catch (const std::exception& e) {
      fail(ErrorKind::kScorer, "scorer '" + scorer.id() + "' failed on " + where + ": " + e.what());
    }
    if (maps.size() != count) {
      fail(ErrorKind::kScorer, "scorer '" + scorer.id() + "' returned " +
                                   std::to_string(maps.size()) + " maps for " + where);
    }
    for (std::size_t k = 0; k < count; ++k) {
      if (maps[k].extent() != tiles[k].image.extent()) {
        fail(ErrorKind::kScorer, "scorer '" + scorer.id() + "' returned a map of the wrong size for tile " +
                                     tiles[k].id);
      }
    }

    std::lock_guard lock(merge_mutex);
    pending.emplace(chunk, std::move(maps));
    for (auto it = pending.find(next_merge); it != pending.end(); it = pending.find(next_merge)) {
      merge(it->first, it->second);
      pending.erase(it);
      ++next_merge;
    }
  });

  const auto cover_x = axis_coverage(plan.xs, plan.tile, w);
  const auto cover_y = axis_coverage(plan.ys, plan.tile, h);
  std::vector<float> out(sum.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double v = sum[i] / (static_cast<double>(cover_x[x]) * cover_y[y]);
      out[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return ProbMap(w, h, std::move(out));
}

ProbMap predict(const ImageRGB& image, std::span<const ScorerPtr> scorers,
                const PredictOptions& options) {
  if (scorers.empty()) fail(ErrorKind::kInvalidArgument, "predict: need at least one scorer");
  const TilePlan plan = plan_tiles(image.width(), image.height(), options.tile, options.overlap);

  if (!options.tta && scorers.size() == 1) {
    return run_tiled(image, *scorers[0], plan, options.jobs);
  }

  const std::vector<TtaVariant> variants =
      options.tta ? tta_expand(image) : std::vector<TtaVariant>{{TtaKind::kIdentity, image}};

  auto score_variant = [&](const Scorer& s, const TtaVariant& v) {
    return tta_pull_back(run_tiled(v.image, s, plan, options.jobs, tta_frame(v.kind, image.extent())),
                         v.kind);
  };

  std::vector<double> total(image.pixel_count(), 0.0);
  std::vector<double> acc(total.size());
  std::vector<double> pair(total.size());
  for (const auto& scorer : scorers) {
    if (!scorer) fail(ErrorKind::kInvalidArgument, "predict: null scorer");
    // Mirror variants are summed in pairs so a mirror-symmetric input gives
    // a bit-exact mirror-symmetric sum.
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i = 0; i < variants.size(); i += 2) {
      std::fill(pair.begin(), pair.end(), 0.0);
      add_into(pair, score_variant(*scorer, variants[i]));
      if (i + 1 < variants.size()) add_into(pair, score_variant(*scorer, variants[i + 1]));
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += pair[k];
    }
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += acc[k];
  }

  const double denom = static_cast<double>(scorers.size() * variants.size());
  std::vector<float> out(total.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = static_cast<float>(std::clamp(total[k] / denom, 0.0, 1.0));
  }
  return ProbMap(image.width(), image.height(), std::move(out));
}

}  // namespace mitodet::infer
