#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mitodet/metrics/metrics.hpp"
#include "mitodet/postprocess/postprocess.hpp"

namespace mitodet::cli {

// `image_id,x,y,score`, coordinates to 3 decimals and scores to 4.
std::string detections_to_csv(std::span<const metrics::ImageDetections> images);
// Rows grouped per image in order of first appearance. `source` prefixes
// error messages, which carry the 1-based line number.
std::vector<metrics::ImageDetections> detections_from_csv(std::string_view text,
                                                          const std::string& source = "detections");

struct ImageCandidates {
  std::string image_id;
  std::vector<postprocess::Candidate> candidates;
};

// `image_id,x,y,area,seg_score`.
std::string candidates_to_csv(std::span<const ImageCandidates> images);
std::vector<ImageCandidates> candidates_from_csv(std::string_view text,
                                                 const std::string& source = "candidates");

}  // namespace mitodet::cli
