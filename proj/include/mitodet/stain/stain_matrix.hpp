#pragma once

#include <array>
#include <string>
#include <string_view>

namespace mitodet::stain {

using Vec3 = std::array<double, 3>;

double norm(const Vec3& v);
double angle_degrees(const Vec3& a, const Vec3& b);

/// Two unit optical-density stain vectors: column 0 hematoxylin, column 1
/// eosin. All entries are non-negative and the columns are more than
/// kMinStainAngleDegrees apart.
class StainMatrix {
 public:
  static constexpr double kMinStainAngleDegrees = 1.0;

  // Normalizes both columns; throws kDegenerateStain on negative entries,
  // zero columns or (near-)parallel columns.
  StainMatrix(const Vec3& hematoxylin, const Vec3& eosin);

  // Conventional H&E pair, used as the fallback when estimation fails.
  static StainMatrix reference();

  const Vec3& hematoxylin() const noexcept { return columns_[0]; }
  const Vec3& eosin() const noexcept { return columns_[1]; }
  const Vec3& column(int i) const noexcept { return columns_[i]; }

  // (M^T M)^-1 M^T, rows are the per-stain least-squares projectors.
  const std::array<Vec3, 2>& pseudo_inverse() const noexcept { return pinv_; }

  // {"h":[a,b,c],"e":[d,e,f]} with 9 significant digits.
  std::string to_json() const;
  static StainMatrix from_json(std::string_view text);

  bool operator==(const StainMatrix& other) const { return columns_ == other.columns_; }

 private:
  std::array<Vec3, 2> columns_;
  std::array<Vec3, 2> pinv_;
};

}  // namespace mitodet::stain
