#include "support.hpp"

#include <stdlib.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <stdexcept>

namespace testsupport {

namespace fs = std::filesystem;
using mitodet::stain::Vec3;

TempDir::TempDir() {
  std::string pattern = (fs::temp_directory_path() / "mitodet-test-XXXXXX").string();
  if (::mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Vec3 perturb_direction(const Vec3& v, double max_deg, Rng& rng) {
  for (;;) {
    Vec3 axis{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    // Remove the component along v so the rotation angle is exact.
    const double n = mitodet::stain::norm(v);
    const Vec3 u{v[0] / n, v[1] / n, v[2] / n};
    const double d = axis[0] * u[0] + axis[1] * u[1] + axis[2] * u[2];
    for (int i = 0; i < 3; ++i) axis[i] -= d * u[i];
    const double an = mitodet::stain::norm(axis);
    if (an < 1e-6) continue;
    const double t = rng.uniform(0.0, max_deg) * M_PI / 180.0;
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = std::cos(t) * u[i] + std::sin(t) * axis[i] / an;
    if (out[0] >= 0.01 && out[1] >= 0.01 && out[2] >= 0.01) return out;
  }
}

ImageRGB two_stain_image(int width, int height, const Vec3& h, const Vec3& e, Rng& rng) {
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < static_cast<std::size_t>(width) * height; ++i) {
    const double kind = rng.uniform();
    double ch = 0.0;
    double ce = 0.0;
    if (kind < 0.1) {
      ch = rng.uniform(0.0, 0.02);
      ce = rng.uniform(0.0, 0.02);
    } else if (kind < 0.225) {
      ch = rng.uniform(0.5, 3.0);
    } else if (kind < 0.35) {
      ce = rng.uniform(0.5, 3.0);
    } else {
      ch = rng.uniform(0.05, 1.2);
      ce = rng.uniform(0.05, 1.2);
    }
    for (int c = 0; c < 3; ++c) {
      const double od = ch * h[c] + ce * e[c];
      data[i * 3 + c] = static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * std::exp(-od)), 0L, 255L));
    }
  }
  return ImageRGB(width, height, std::move(data));
}

ImageRGB tissue_with_nuclei(int width, int height, const std::vector<Point2>& points, double radius,
                            Rng& rng) {
  const auto m = mitodet::stain::StainMatrix::reference();
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double ch = rng.uniform(0.35, 0.55);
      double ce = rng.uniform(0.6, 1.0);
      for (const auto& p : points) {
        const double d2 = (x - p.x) * (x - p.x) + (y - p.y) * (y - p.y);
        if (d2 <= radius * radius) ch += 1.2 * std::exp(-d2 / (radius * radius));
      }
      for (int c = 0; c < 3; ++c) {
        const double od = ch * m.hematoxylin()[c] + ce * m.eosin()[c];
        data[(static_cast<std::size_t>(y) * width + x) * 3 + c] =
            static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * std::exp(-od)), 0L, 255L));
      }
    }
  }
  return ImageRGB(width, height, std::move(data));
}

std::vector<Point2> plant_points(Rng& rng, int width, int height, int n, double border, double min_dist) {
  std::vector<Point2> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < n) {
    if (++attempts > 100000) throw std::runtime_error("plant_points: cannot place points");
    const Point2 p{rng.uniform(border, width - 1 - border), rng.uniform(border, height - 1 - border)};
    bool ok = true;
    for (const auto& q : out) ok = ok && std::hypot(p.x - q.x, p.y - q.y) >= min_dist;
    if (ok) out.push_back(p);
  }
  return out;
}

BinaryMask random_mask(Rng& rng, int width, int height, double density) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * height);
  for (auto& b : bits) b = rng.bernoulli(density) ? 1 : 0;
  return BinaryMask(width, height, std::move(bits));
}

long long lattice_disk_count(double cx, double cy, double r, int w, int h) {
  long long n = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) ++n;
    }
  }
  return n;
}

std::vector<int> flood_fill_labels(const BinaryMask& mask, int* count) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> labels(static_cast<std::size_t>(w) * h, 0);
  int next = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y) || labels[static_cast<std::size_t>(y) * w + x] != 0) continue;
      ++next;
      std::deque<std::pair<int, int>> queue{{x, y}};
      labels[static_cast<std::size_t>(y) * w + x] = next;
      while (!queue.empty()) {
        const auto [cx, cy] = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h || !mask.at(nx, ny)) continue;
            int& l = labels[static_cast<std::size_t>(ny) * w + nx];
            if (l == 0) {
              l = next;
              queue.emplace_back(nx, ny);
            }
          }
        }
      }
    }
  }
  if (count) *count = next;
  return labels;
}

BinaryMask brute_open(const BinaryMask& mask, int radius) {
  const int w = mask.width();
  const int h = mask.height();
  auto in_disk = [&](int dx, int dy) { return dx * dx + dy * dy <= radius * radius; };
  std::vector<std::uint8_t> eroded(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool all = true;
      for (int dy = -radius; dy <= radius && all; ++dy) {
        for (int dx = -radius; dx <= radius && all; ++dx) {
          if (!in_disk(dx, dy)) continue;
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          all = mask.at(nx, ny);
        }
      }
      eroded[static_cast<std::size_t>(y) * w + x] = all;
    }
  }
  std::vector<std::uint8_t> out(eroded.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool any = false;
      for (int dy = -radius; dy <= radius && !any; ++dy) {
        for (int dx = -radius; dx <= radius && !any; ++dx) {
          if (!in_disk(dx, dy)) continue;
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          any = eroded[static_cast<std::size_t>(ny) * w + nx] != 0;
        }
      }
      out[static_cast<std::size_t>(y) * w + x] = any;
    }
  }
  return BinaryMask(w, h, std::move(out));
}

BruteMatch brute_match(const std::vector<Point2>& dets, const std::vector<Point2>& gts, double radius) {
  BruteMatch best{0, 0.0};
  std::vector<char> used(gts.size(), 0);
  std::function<void(std::size_t, int, double)> go = [&](std::size_t i, int tp, double total) {
    if (i == dets.size()) {
      if (tp > best.tp || (tp == best.tp && total < best.total)) best = {tp, total};
      return;
    }
    go(i + 1, tp, total);  // detection i unmatched
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (used[j]) continue;
      const double d = std::hypot(dets[i].x - gts[j].x, dets[i].y - gts[j].y);
      if (d > radius) continue;
      used[j] = 1;
      go(i + 1, tp + 1, total + d);
      used[j] = 0;
    }
  };
  go(0, 0, 0.0);
  return best;
}

std::vector<std::pair<int, Point2>> brute_components(const BinaryMask& mask) {
  int count = 0;
  const auto labels = flood_fill_labels(mask, &count);
  std::vector<std::pair<int, Point2>> out(count, {0, Point2{}});
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const int l = labels[static_cast<std::size_t>(y) * mask.width() + x];
      if (l == 0) continue;
      auto& [area, c] = out[l - 1];
      ++area;
      c.x += x;
      c.y += y;
    }
  }
  for (auto& [area, c] : out) {
    c.x /= area;
    c.y /= area;
  }
  return out;
}

}  // namespace testsupport
