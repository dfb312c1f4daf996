#pragma once

#include <span>
#include <vector>

namespace mitodet {

// Normalized 1-D Gaussian taps with half-width ceil(3 * sigma).
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian smoothing of one float plane with reflect padding.
// sigma <= 0 copies the input.
std::vector<float> gaussian_blur_plane(std::span<const float> plane, int width,
                                       int height, double sigma);

// Same, for `channels` interleaved planes.
std::vector<float> gaussian_blur_interleaved(std::span<const float> data,
                                             int width, int height, int channels,
                                             double sigma);

}  // namespace mitodet
