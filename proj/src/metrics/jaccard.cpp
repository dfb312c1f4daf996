#include "mitodet/core/error.hpp"
#include "mitodet/metrics/metrics.hpp"

namespace mitodet::metrics {

double jaccard(const BinaryMask& a, const BinaryMask& b) {
  if (a.extent() != b.extent()) fail(ErrorKind::kInvalidArgument, "jaccard: mask geometries differ");
  const auto x = a.bits();
  const auto y = b.bits();
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    inter += (x[i] & y[i]) != 0;
    uni += (x[i] | y[i]) != 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace mitodet::metrics
