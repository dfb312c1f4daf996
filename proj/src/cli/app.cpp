#include "mitodet/cli/app.hpp"

#include <array>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mitodet/cli/commands.hpp"

namespace mitodet::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mitotic-figure detection pipeline tools", "mitodet"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::vector<std::string> overrides;
  bool verbose = false;
  app.add_option("--config", config_path, "Pipeline config file");
  app.add_option("--seed", seed, "Random seed (overrides the config)");
  app.add_option("--jobs", jobs, "Worker threads (overrides the config)");
  app.add_option("--set", overrides, "Config override key=value (repeatable)");
  app.add_flag("-v,--verbose", verbose, "Progress messages on stderr");

  std::function<int(Env&)> action;

  MaskgenOptions maskgen;
  int maskgen_radius = 0;
  auto* c_mask = app.add_subcommand("maskgen", "Draw pseudo ground-truth disk masks");
  c_mask->add_option("--annotations", maskgen.annotations)->required();
  c_mask->add_option("--images", maskgen.images)->required();
  c_mask->add_option("--out", maskgen.out_dir, "Output directory")->required();
  auto* radius_opt = c_mask->add_option("--radius", maskgen_radius, "Disk radius in px");
  c_mask->add_flag("--scale-by-mpp", maskgen.scale_by_mpp, "Treat the radius as given at 0.25 um/px");
  c_mask->callback([&] {
    if (radius_opt->count() > 0) maskgen.radius = maskgen_radius;
    action = [&](Env& env) { return cmd_maskgen(maskgen, env); };
  });

  SampleOptions sample;
  auto* c_sample = app.add_subcommand("sample", "List training patches");
  c_sample->add_option("--annotations", sample.annotations)->required();
  c_sample->add_option("--images", sample.images)->required();
  c_sample->add_option("--out", sample.out, "Patch CSV")->required();
  c_sample->add_option("--stage", sample.stage, "seg or cls")->check(CLI::IsMember({"seg", "cls"}));
  c_sample->add_flag("--balanced", sample.balanced, "Under-sample negatives for one epoch");
  c_sample->add_option("--epoch", sample.epoch, "Epoch index for --balanced");
  c_sample->callback([&] { action = [&](Env& env) { return cmd_sample(sample, env); }; });

  FoldsOptions folds;
  std::string folds_out;
  auto* c_folds = app.add_subcommand("folds", "Assign images to cross-validation folds");
  c_folds->add_option("--annotations", folds.annotations)->required();
  c_folds->add_option("-k,--k", folds.k, "Number of folds");
  auto* folds_out_opt = c_folds->add_option("--out", folds_out, "Output JSON (default stdout)");
  c_folds->callback([&] {
    if (folds_out_opt->count() > 0) folds.out = folds_out;
    action = [&](Env& env) { return cmd_folds(folds, env); };
  });

  DetectOptions detect;
  std::string detect_overlay, detect_ann, detect_cands;
  auto* c_detect = app.add_subcommand("detect", "Segment, extract candidates and refine");
  c_detect->add_option("--images", detect.images)->required();
  c_detect->add_option("--out", detect.out, "Detections CSV")->required();
  auto* o_overlay = c_detect->add_option("--overlay", detect_overlay, "Directory for overlay PNGs");
  auto* o_dann = c_detect->add_option("--annotations", detect_ann, "Ground truth for oracle scorers");
  auto* o_cands = c_detect->add_option("--candidates-out", detect_cands, "Also write the candidates CSV");
  c_detect->callback([&] {
    if (o_overlay->count() > 0) detect.overlay_dir = detect_overlay;
    if (o_dann->count() > 0) detect.annotations = detect_ann;
    if (o_cands->count() > 0) detect.candidates_out = detect_cands;
    action = [&](Env& env) { return cmd_detect(detect, env); };
  });

  RefineOptions refine;
  std::string refine_ann;
  auto* c_refine = app.add_subcommand("refine", "Classify an existing candidates CSV");
  c_refine->add_option("--images", refine.images)->required();
  c_refine->add_option("--candidates", refine.candidates)->required();
  c_refine->add_option("--out", refine.out, "Detections CSV")->required();
  auto* o_rann = c_refine->add_option("--annotations", refine_ann, "Ground truth for the oracle classifier");
  c_refine->callback([&] {
    if (o_rann->count() > 0) refine.annotations = refine_ann;
    action = [&](Env& env) { return cmd_refine(refine, env); };
  });

  EvalOptions eval;
  std::string eval_dets, eval_ann, eval_out, eval_counts;
  double radius_px = 0.0, radius_um = 0.0;
  auto* c_eval = app.add_subcommand("eval", "Match detections to ground truth and report P/R/F1");
  auto* o_edets = c_eval->add_option("--detections", eval_dets);
  auto* o_eann = c_eval->add_option("--annotations", eval_ann);
  auto* o_rpx = c_eval->add_option("--radius-px", radius_px);
  auto* o_rum = c_eval->add_option("--radius-um", radius_um);
  c_eval->add_flag("--greedy", eval.greedy, "Greedy by score instead of optimal matching");
  auto* o_counts = c_eval->add_option("--counts", eval_counts, "tp,fp,fn");
  auto* o_eout = c_eval->add_option("--out", eval_out, "Report JSON");
  c_eval->callback([&] {
    if (o_edets->count() > 0) eval.detections = eval_dets;
    if (o_eann->count() > 0) eval.annotations = eval_ann;
    if (o_rpx->count() > 0) eval.radius_px = radius_px;
    if (o_rum->count() > 0) eval.radius_um = radius_um;
    if (o_eout->count() > 0) eval.out = eval_out;
    if (o_counts->count() > 0) {
      std::array<long long, 3> counts{};
      char tail = 0;
      if (std::sscanf(eval_counts.c_str(), "%lld,%lld,%lld%c", &counts[0], &counts[1], &counts[2], &tail) != 3) {
        throw CLI::ValidationError("--counts", "expected tp,fp,fn");
      }
      eval.counts = counts;
    }
    action = [&](Env& env) { return cmd_eval(eval, env); };
  });

  NormalizeOptions normalize;
  std::string n_matrix, n_image, n_save;
  auto* c_norm = app.add_subcommand("normalize", "Map an image onto a target stain matrix");
  c_norm->add_option("--image", normalize.image)->required();
  c_norm->add_option("--out", normalize.out)->required();
  auto* o_nm = c_norm->add_option("--target-matrix", n_matrix, "Stain matrix JSON");
  auto* o_ni = c_norm->add_option("--target-image", n_image, "Estimate the target from this image");
  auto* o_ns = c_norm->add_option("--save-matrix", n_save, "Write the input's estimated stain matrix");
  c_norm->callback([&] {
    if (o_nm->count() > 0) normalize.target_matrix = n_matrix;
    if (o_ni->count() > 0) normalize.target_image = n_image;
    if (o_ns->count() > 0) normalize.save_matrix = n_save;
    action = [&](Env& env) { return cmd_normalize(normalize, env); };
  });

  AugmentOptions aug;
  std::string a_mask, a_mask_out;
  auto* c_aug = app.add_subcommand("augment", "Apply the configured augmentation pipeline once");
  c_aug->add_option("--image", aug.image)->required();
  c_aug->add_option("--out", aug.out)->required();
  auto* o_am = c_aug->add_option("--mask", a_mask);
  auto* o_amo = c_aug->add_option("--mask-out", a_mask_out);
  c_aug->callback([&] {
    if (o_am->count() > 0) aug.mask = a_mask;
    if (o_amo->count() > 0) aug.mask_out = a_mask_out;
    action = [&](Env& env) { return cmd_augment(aug, env); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    PipelineConfig config = config_path ? load_config(*config_path) : PipelineConfig{};
    for (const auto& o : overrides) apply_override(config, o);
    if (seed) config.seed = *seed;
    if (jobs) config.jobs = *jobs;
    config.validate();
    Env env{std::move(config), verbose, out, err};
    return action(env);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace mitodet::cli
