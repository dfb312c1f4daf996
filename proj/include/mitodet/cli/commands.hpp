#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "mitodet/cli/config.hpp"
#include "mitodet/core/error.hpp"

namespace mitodet::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitScorer = 3 };

int exit_code_for(ErrorKind kind);

struct Env {
  PipelineConfig config;
  bool verbose = false;
  std::ostream& out;
  std::ostream& err;
};

// Each command throws mitodet::Error on failure; a return value is the exit
// code for runs that completed with per-item problems.

struct MaskgenOptions {
  fs::path annotations;
  fs::path images;
  fs::path out_dir;
  std::optional<int> radius;  // config disk_radius when unset
  bool scale_by_mpp = false;  // radius is given at 0.25 um/px
};
int cmd_maskgen(const MaskgenOptions& opt, Env& env);

struct SampleOptions {
  fs::path annotations;
  fs::path images;
  fs::path out;
  std::string stage = "seg";  // seg: grid windows; cls: point-centred patches
  bool balanced = false;
  int epoch = 0;
};
int cmd_sample(const SampleOptions& opt, Env& env);

struct FoldsOptions {
  fs::path annotations;
  int k = 3;
  std::optional<fs::path> out;  // stdout when unset
};
int cmd_folds(const FoldsOptions& opt, Env& env);

struct DetectOptions {
  fs::path images;
  fs::path out;
  std::optional<fs::path> overlay_dir;
  std::optional<fs::path> annotations;  // required by oracle scorers
  std::optional<fs::path> candidates_out;
};
int cmd_detect(const DetectOptions& opt, Env& env);

struct RefineOptions {
  fs::path images;
  fs::path candidates;
  fs::path out;
  std::optional<fs::path> annotations;
};
int cmd_refine(const RefineOptions& opt, Env& env);

struct EvalOptions {
  std::optional<fs::path> detections;
  std::optional<fs::path> annotations;
  std::optional<double> radius_px;
  std::optional<double> radius_um;
  bool greedy = false;
  std::optional<std::array<long long, 3>> counts;  // tp, fp, fn
  std::optional<fs::path> out;
};
int cmd_eval(const EvalOptions& opt, Env& env);

struct NormalizeOptions {
  fs::path image;
  fs::path out;
  std::optional<fs::path> target_matrix;
  std::optional<fs::path> target_image;
  std::optional<fs::path> save_matrix;  // stain matrix estimated from the input
};
int cmd_normalize(const NormalizeOptions& opt, Env& env);

struct AugmentOptions {
  fs::path image;
  fs::path out;
  std::optional<fs::path> mask;
  std::optional<fs::path> mask_out;
};
int cmd_augment(const AugmentOptions& opt, Env& env);

}  // namespace mitodet::cli
