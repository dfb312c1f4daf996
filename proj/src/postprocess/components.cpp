#include <numeric>

#include "mitodet/postprocess/postprocess.hpp"

namespace mitodet::postprocess {
namespace {

int find(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

void unite(std::vector<int>& parent, int a, int b) {
  a = find(parent, a);
  b = find(parent, b);
  if (a == b) return;
  if (a < b) {
    parent[b] = a;
  } else {
    parent[a] = b;
  }
}

}  // namespace

Labels label_components(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  const auto bits = mask.bits();
  const std::size_t n = bits.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);

  auto set = [&](int x, int y) {
    return x >= 0 && x < w && y >= 0 && bits[static_cast<std::size_t>(y) * w + x] != 0;
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!set(x, y)) continue;
      const int i = y * w + x;
      // Already-visited neighbours: W, NW, N, NE.
      if (set(x - 1, y)) unite(parent, i, i - 1);
      if (set(x - 1, y - 1)) unite(parent, i, i - w - 1);
      if (set(x, y - 1)) unite(parent, i, i - w);
      if (set(x + 1, y - 1)) unite(parent, i, i - w + 1);
    }
  }

  // Roots are the smallest index of each tree, i.e. the first pixel in raster order.
  Labels out{w, h, 0, std::vector<int>(n, 0)};
  std::vector<int> root_label(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i] == 0) continue;
    const int r = find(parent, static_cast<int>(i));
    if (root_label[r] == 0) root_label[r] = ++out.count;
    out.labels[i] = root_label[r];
  }
  return out;
}

}  // namespace mitodet::postprocess
