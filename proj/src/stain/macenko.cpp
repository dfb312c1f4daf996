#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mitodet/core/error.hpp"
#include "mitodet/stain/stain.hpp"

namespace mitodet::stain {
namespace {

// Linear-interpolated percentile (numpy default); reorders `values`.
double percentile(std::vector<double>& values, double pct) {
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double a = values[lo];
  if (frac == 0.0 || lo + 1 >= values.size()) return a;
  const double b = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return a + frac * (b - a);
}

// Flip to the non-negative orthant; clamp residual negative components.
Vec3 orient(const Eigen::Vector3d& v) {
  const double sign = v.sum() < 0.0 ? -1.0 : 1.0;
  Vec3 out{};
  for (int i = 0; i < 3; ++i) out[i] = std::max(0.0, sign * v[i]);
  return out;
}

}  // namespace

StainMatrix estimate_stain_matrix(const ImageRGB& image, const MacenkoParams& params) {
  return estimate_stain_matrix(rgb_to_od(image), params);
}

StainMatrix estimate_stain_matrix(const OdField& od, const MacenkoParams& params) {
  const std::size_t n = od.pixel_count();
  const float beta = static_cast<float>(params.beta);

  std::vector<std::uint32_t> tissue;
  tissue.reserve(n);
  Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const float* p = od.values.data() + 3 * i;
    if (p[0] < beta || p[1] < beta || p[2] < beta) continue;
    tissue.push_back(static_cast<std::uint32_t>(i));
    const Eigen::Vector3d v(p[0], p[1], p[2]);
    gram.noalias() += v * v.transpose();
  }
  if (tissue.size() < std::max<std::size_t>(params.min_pixels, 2)) {
    fail(ErrorKind::kInsufficientTissue,
         "insufficient tissue: " + std::to_string(tissue.size()) +
             " pixels above OD threshold, need " + std::to_string(params.min_pixels));
  }

  // Right-singular vectors of the OD matrix are the eigenvectors of its Gram
  // matrix; eigenvalues come back ascending.
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram);
  Eigen::Vector3d u = eig.eigenvectors().col(2);
  Eigen::Vector3d w = eig.eigenvectors().col(1);
  if (u[0] < 0.0) u = -u;
  if (w[0] < 0.0) w = -w;

  std::vector<double> angles(tissue.size());
  for (std::size_t k = 0; k < tissue.size(); ++k) {
    const float* p = od.values.data() + 3 * static_cast<std::size_t>(tissue[k]);
    const Eigen::Vector3d v(p[0], p[1], p[2]);
    angles[k] = std::atan2(w.dot(v), u.dot(v));
  }
  const double phi_min = percentile(angles, params.alpha);
  const double phi_max = percentile(angles, 100.0 - params.alpha);

  Vec3 a = orient(std::cos(phi_min) * u + std::sin(phi_min) * w);
  Vec3 b = orient(std::cos(phi_max) * u + std::sin(phi_max) * w);
  if (norm(a) == 0.0 || norm(b) == 0.0 || !(angle_degrees(a, b) >= params.min_separation_deg)) {
    fail(ErrorKind::kDegenerateStain,
         "degenerate stain estimate: tissue pixels span a single stain direction");
  }
  // Hematoxylin absorbs more red than eosin.
  if (a[0] / norm(a) < b[0] / norm(b)) std::swap(a, b);
  return StainMatrix(a, b);
}

}  // namespace mitodet::stain
