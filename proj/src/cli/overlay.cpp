#include "mitodet/cli/overlay.hpp"

#include <cmath>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

namespace mitodet::cli {

ImageRGB draw_overlay(const ImageRGB& image, std::span<const Detection> detections, int radius) {
  std::vector<std::uint8_t> buf(image.data().begin(), image.data().end());
  cv::Mat canvas(image.height(), image.width(), CV_8UC3, buf.data());
  for (const auto& d : detections) {
    const cv::Scalar rgb(255.0 * d.score, 0.0, 255.0 * (1.0 - d.score));
    cv::circle(canvas, cv::Point(static_cast<int>(std::lround(d.x)), static_cast<int>(std::lround(d.y))),
               radius, rgb, 2, cv::LINE_AA);
  }
  return ImageRGB(image.width(), image.height(), std::move(buf), image.mpp());
}

}  // namespace mitodet::cli
