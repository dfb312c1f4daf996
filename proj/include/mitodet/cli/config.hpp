#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mitodet/augment/augment.hpp"

namespace mitodet::cli {

/// Every tunable of the pipeline. Loaded from a flat TOML-style file whose
/// keys are the member names; unknown keys are rejected.
struct PipelineConfig {
  // Inference and candidate extraction.
  int tile_size = 512;
  int overlap = 75;
  bool tta = true;
  double seg_threshold = 0.5;
  int open_radius = 2;
  int min_area = 60;

  // Refinement.
  int refine_patch = 128;
  double accept_threshold = 0.5;

  // "classical", "oracle" or "external"; external runs every command in
  // segmenter_commands and averages them.
  std::string segmenter = "classical";
  std::vector<std::string> segmenter_commands;
  // "none", "oracle" or "external". With "none" every candidate is kept and
  // scored by its mean segmentation value.
  std::string classifier = "none";
  std::vector<std::string> classifier_commands;
  double oracle_sigma = 6.0;
  double oracle_radius = 17.0;

  double match_radius_px = 30.0;

  // Pseudo-GT and patch sampling.
  int disk_radius = 17;
  int harvest_size = 512;
  int harvest_stride = 256;
  int harvest_margin = 17;
  double negative_ratio = 1.0;

  augment::AugmentSpec augment = augment::AugmentSpec::defaults();

  std::uint64_t seed = 0;
  int jobs = 1;

  // Throws kInvalidArgument naming the offending key.
  void validate() const;

  bool operator==(const PipelineConfig&) const = default;
};

nlohmann::ordered_json config_to_json(const PipelineConfig& config);
// Starts from `base`; keys absent from `doc` keep their value there.
PipelineConfig config_from_json(const nlohmann::ordered_json& doc, const PipelineConfig& base = {});

PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const PipelineConfig& config);

// `key=value` with the value in file syntax; bare words are taken as strings.
// Not validated, so dependent keys can be set in any order.
void apply_override(PipelineConfig& config, std::string_view assignment);

}  // namespace mitodet::cli
