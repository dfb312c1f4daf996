#include "mitodet/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "mitodet/cli/csv.hpp"
#include "mitodet/cli/overlay.hpp"
#include "mitodet/core/annotations.hpp"
#include "mitodet/core/fs.hpp"
#include "mitodet/core/image_io.hpp"
#include "mitodet/core/rng.hpp"
#include "mitodet/dataset/dataset.hpp"
#include "mitodet/infer/predict.hpp"
#include "mitodet/metrics/metrics.hpp"
#include "mitodet/postprocess/postprocess.hpp"
#include "mitodet/stain/stain.hpp"

namespace mitodet::cli {
namespace {

using ImageIndex = std::map<std::string, fs::path>;
using AnnotationIndex = std::map<std::string, AnnotationSet>;

ImageIndex index_images(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(ErrorKind::kNotFound, "not a directory: " + dir.string());
  ImageIndex out;
  for (const auto& path : list_images(dir)) {
    const std::string id = path.stem().string();
    const auto [it, inserted] = out.emplace(id, path);
    if (!inserted) {
      fail(ErrorKind::kData, "two images share the id '" + id + "': " + it->second.filename().string() +
                                 " and " + path.filename().string());
    }
  }
  return out;
}

AnnotationIndex index_annotations(const fs::path& path) {
  AnnotationIndex out;
  for (auto& set : load_annotations(path)) {
    std::string id = set.image_id();
    out.emplace(std::move(id), std::move(set));
  }
  return out;
}

void require_images_for(const AnnotationIndex& anns, const ImageIndex& images, const fs::path& dir) {
  for (const auto& [id, _] : anns) {
    if (!images.contains(id)) {
      fail(ErrorKind::kNotFound, "no image for annotated id '" + id + "' in " + dir.string());
    }
  }
}

AnnotationSet annotations_for(const AnnotationIndex& anns, const std::string& id, double mpp) {
  const auto it = anns.find(id);
  return it == anns.end() ? AnnotationSet(id, {}, mpp) : it->second;
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

std::vector<infer::ScorerPtr> make_segmenters(const PipelineConfig& c, const AnnotationSet* gt) {
  std::vector<infer::ScorerPtr> out;
  if (c.segmenter == "classical") {
    out.push_back(infer::make_classical_scorer());
  } else if (c.segmenter == "oracle") {
    out.push_back(infer::make_oracle_segmenter(*gt, c.oracle_sigma));
  } else {
    for (const auto& cmd : c.segmenter_commands) {
      out.push_back(infer::make_external_scorer(infer::ScorerMode::kSegmentation, cmd));
    }
  }
  return out;
}

std::vector<infer::ScorerPtr> make_classifiers(const PipelineConfig& c, const AnnotationSet* gt) {
  std::vector<infer::ScorerPtr> out;
  if (c.classifier == "oracle") {
    out.push_back(infer::make_oracle_classifier(*gt, c.oracle_radius));
  } else if (c.classifier == "external") {
    for (const auto& cmd : c.classifier_commands) {
      out.push_back(infer::make_external_scorer(infer::ScorerMode::kClassification, cmd));
    }
  }
  return out;
}

std::optional<AnnotationIndex> oracle_truth(const PipelineConfig& c, const std::optional<fs::path>& path,
                                            bool needs_segmenter) {
  const bool oracle = (needs_segmenter && c.segmenter == "oracle") || c.classifier == "oracle";
  if (!oracle) return std::nullopt;
  if (!path) fail(ErrorKind::kInvalidArgument, "oracle scorers need --annotations");
  return index_annotations(*path);
}

postprocess::RefineParams refine_params(const PipelineConfig& c) {
  return {c.refine_patch, c.accept_threshold, c.tta, c.jobs};
}

std::vector<Detection> keep_all(const std::vector<postprocess::Candidate>& candidates) {
  std::vector<Detection> out;
  for (const auto& c : candidates) out.emplace_back(c.centroid.x, c.centroid.y, c.seg_score);
  return out;
}

void report_skip(Env& env, const fs::path& path, const Error& e) {
  env.err << "skipping " << path.string() << ": " << e.what() << "\n";
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return kExitUsage;
    case ErrorKind::kScorer: return kExitScorer;
    default: return kExitData;
  }
}

int cmd_maskgen(const MaskgenOptions& opt, Env& env) {
  const int radius = opt.radius.value_or(env.config.disk_radius);
  if (radius < 1) fail(ErrorKind::kInvalidArgument, "maskgen: radius must be >= 1");
  const AnnotationIndex anns = index_annotations(opt.annotations);
  const ImageIndex images = index_images(opt.images);
  require_images_for(anns, images, opt.images);
  fs::create_directories(opt.out_dir);
  for (const auto& [id, path] : images) {
    const ImageRGB image = load_image(path);
    const AnnotationSet set = annotations_for(anns, id, image.mpp());
    set.check_bounds(image.extent());
    const int r = opt.scale_by_mpp
                      ? std::max(1, static_cast<int>(std::lround(radius * kDefaultMpp / image.mpp())))
                      : radius;
    const BinaryMask mask = dataset::disk_mask(set, image.width(), image.height(), r);
    save_png(opt.out_dir / (id + "_mask.png"), mask);
    if (env.verbose) env.err << id << ": " << mask.count() << " mask pixels (radius " << r << ")\n";
  }
  return kExitOk;
}

int cmd_sample(const SampleOptions& opt, Env& env) {
  if (opt.stage != "seg" && opt.stage != "cls") {
    fail(ErrorKind::kInvalidArgument, "sample: --stage must be seg or cls");
  }
  if (opt.epoch < 0) fail(ErrorKind::kInvalidArgument, "sample: --epoch must be >= 0");
  const PipelineConfig& c = env.config;
  const AnnotationIndex anns = index_annotations(opt.annotations);
  const ImageIndex images = index_images(opt.images);
  require_images_for(anns, images, opt.images);

  std::vector<dataset::PatchRecord> records;
  for (const auto& [id, path] : images) {
    const ImageRGB image = load_image(path);
    const AnnotationSet set = annotations_for(anns, id, image.mpp());
    set.check_bounds(image.extent());
    const auto got = opt.stage == "seg"
                         ? dataset::harvest_patches(image.extent(), set,
                                                    {c.harvest_size, c.harvest_stride, c.harvest_margin})
                         : dataset::harvest_point_patches(image.extent(), set, c.refine_patch);
    records.insert(records.end(), got.begin(), got.end());
  }
  if (opt.balanced) {
    Rng rng = Rng::derive(c.seed, static_cast<std::uint64_t>(opt.epoch));
    dataset::Epoch epoch = dataset::epoch_sample(records, rng, c.negative_ratio);
    if (epoch.no_positives) env.err << "warning: no positive patches; epoch is empty\n";
    records = std::move(epoch.records);
  }
  ensure_parent(opt.out);
  write_file_atomic(opt.out, dataset::patches_to_csv(records));
  if (env.verbose) env.err << records.size() << " patches written to " << opt.out.string() << "\n";
  return kExitOk;
}

int cmd_folds(const FoldsOptions& opt, Env& env) {
  std::vector<std::string> ids;
  for (const auto& set : load_annotations(opt.annotations)) ids.push_back(set.image_id());
  const std::string text = dataset::folds_to_json(dataset::make_folds(ids, opt.k, env.config.seed));
  if (opt.out) {
    ensure_parent(*opt.out);
    write_file_atomic(*opt.out, text);
  } else {
    env.out << text;
  }
  return kExitOk;
}

int cmd_detect(const DetectOptions& opt, Env& env) {
  const PipelineConfig& c = env.config;
  const auto truth = oracle_truth(c, opt.annotations, true);
  const ImageIndex images = index_images(opt.images);
  if (images.empty()) env.err << "warning: no images found in " << opt.images.string() << "\n";
  if (opt.overlay_dir) fs::create_directories(*opt.overlay_dir);

  std::vector<metrics::ImageDetections> all;
  std::vector<ImageCandidates> all_candidates;
  bool skipped = false;
  for (const auto& [id, path] : images) {
    std::optional<ImageRGB> image;
    try {
      image = load_image(path);
    } catch (const Error& e) {
      report_skip(env, path, e);
      skipped = true;
      continue;
    }
    std::optional<AnnotationSet> gt;
    if (truth) gt = annotations_for(*truth, id, image->mpp());

    const auto segmenters = make_segmenters(c, gt ? &*gt : nullptr);
    const ProbMap map = infer::predict(*image, segmenters, {c.tile_size, c.overlap, c.tta, c.jobs});
    const auto candidates = postprocess::extract_candidates(map, {c.seg_threshold, c.open_radius, c.min_area});
    const auto classifiers = make_classifiers(c, gt ? &*gt : nullptr);
    std::vector<Detection> dets = classifiers.empty()
                                      ? keep_all(candidates)
                                      : postprocess::refine(*image, candidates, classifiers, refine_params(c));
    if (env.verbose) {
      env.err << id << ": " << candidates.size() << " candidates, " << dets.size() << " detections\n";
    }
    if (opt.overlay_dir) save_png(*opt.overlay_dir / (id + "_overlay.png"), draw_overlay(*image, dets));
    all_candidates.push_back({id, candidates});
    all.push_back({id, std::move(dets)});
  }

  ensure_parent(opt.out);
  write_file_atomic(opt.out, detections_to_csv(all));
  if (opt.candidates_out) {
    ensure_parent(*opt.candidates_out);
    write_file_atomic(*opt.candidates_out, candidates_to_csv(all_candidates));
  }
  return skipped ? kExitData : kExitOk;
}

int cmd_refine(const RefineOptions& opt, Env& env) {
  const PipelineConfig& c = env.config;
  if (c.classifier == "none") fail(ErrorKind::kInvalidArgument, "refine: config selects no classifier");
  const auto truth = oracle_truth(c, opt.annotations, false);
  const ImageIndex images = index_images(opt.images);
  const auto groups = candidates_from_csv(read_text(opt.candidates), opt.candidates.string());

  std::vector<metrics::ImageDetections> all;
  bool skipped = false;
  for (const auto& group : groups) {
    const auto it = images.find(group.image_id);
    if (it == images.end()) {
      env.err << "skipping " << group.image_id << ": no such image in " << opt.images.string() << "\n";
      skipped = true;
      continue;
    }
    std::optional<ImageRGB> image;
    try {
      image = load_image(it->second);
    } catch (const Error& e) {
      report_skip(env, it->second, e);
      skipped = true;
      continue;
    }
    std::optional<AnnotationSet> gt;
    if (truth) gt = annotations_for(*truth, group.image_id, image->mpp());
    const auto classifiers = make_classifiers(c, gt ? &*gt : nullptr);
    all.push_back({group.image_id, postprocess::refine(*image, group.candidates, classifiers, refine_params(c))});
    if (env.verbose) {
      env.err << group.image_id << ": kept " << all.back().detections.size() << " of "
              << group.candidates.size() << "\n";
    }
  }
  ensure_parent(opt.out);
  write_file_atomic(opt.out, detections_to_csv(all));
  return skipped ? kExitData : kExitOk;
}

int cmd_eval(const EvalOptions& opt, Env& env) {
  metrics::Report report;
  if (opt.counts) {
    if (opt.detections || opt.annotations) {
      fail(ErrorKind::kInvalidArgument, "eval: --counts excludes --detections and --annotations");
    }
    const auto [tp, fp, fn] = *opt.counts;
    if (tp < 0 || fp < 0 || fn < 0) fail(ErrorKind::kInvalidArgument, "eval: counts must be >= 0");
    report = metrics::report_from_counts(tp, fp, fn);
  } else {
    if (!opt.detections || !opt.annotations) {
      fail(ErrorKind::kInvalidArgument, "eval: need --detections and --annotations, or --counts");
    }
    if (opt.radius_px && opt.radius_um) {
      fail(ErrorKind::kInvalidArgument, "eval: give at most one of --radius-px and --radius-um");
    }
    const auto sets = load_annotations(*opt.annotations);
    double radius = opt.radius_px.value_or(env.config.match_radius_px);
    if (opt.radius_um) {
      double mpp = sets.empty() ? kDefaultMpp : sets.front().mpp();
      for (const auto& s : sets) {
        if (s.mpp() != mpp) fail(ErrorKind::kData, "eval: annotations mix pixel sizes; use --radius-px");
      }
      radius = *opt.radius_um / mpp;
    }
    if (!(radius > 0.0)) fail(ErrorKind::kInvalidArgument, "eval: matching radius must be > 0");
    std::vector<metrics::ImageTruth> truth;
    for (const auto& s : sets) truth.push_back({s.image_id(), s.mitotic_points()});
    const auto dets = detections_from_csv(read_text(*opt.detections), opt.detections->string());
    report = metrics::evaluate_run(dets, truth, radius,
                                   opt.greedy ? metrics::MatchMethod::kGreedy : metrics::MatchMethod::kHungarian);
  }
  if (!opt.counts) env.out << report.to_table();
  char line[160];
  std::snprintf(line, sizeof(line), "precision %.4f  recall %.4f  f1 %.4f  (tp %lld, fp %lld, fn %lld)\n",
                report.scores.precision, report.scores.recall, report.scores.f1, report.tp, report.fp, report.fn);
  env.out << line;
  if (opt.out) {
    ensure_parent(*opt.out);
    write_file_atomic(*opt.out, report.to_json());
  }
  return kExitOk;
}

int cmd_normalize(const NormalizeOptions& opt, Env& env) {
  if (opt.target_matrix && opt.target_image) {
    fail(ErrorKind::kInvalidArgument, "normalize: give at most one of --target-matrix and --target-image");
  }
  const ImageRGB image = load_image(opt.image);
  stain::StainMatrix target = stain::StainMatrix::reference();
  if (opt.target_matrix) target = stain::StainMatrix::from_json(read_text(*opt.target_matrix));
  if (opt.target_image) target = stain::estimate_stain_matrix(load_image(*opt.target_image));
  if (opt.save_matrix) {
    ensure_parent(*opt.save_matrix);
    write_file_atomic(*opt.save_matrix, stain::estimate_stain_matrix(image).to_json() + "\n");
  }
  ensure_parent(opt.out);
  save_png(opt.out, stain::normalize_stain(image, target));
  if (env.verbose) env.err << "normalized " << opt.image.string() << "\n";
  return kExitOk;
}

int cmd_augment(const AugmentOptions& opt, Env& env) {
  if (opt.mask_out && !opt.mask) fail(ErrorKind::kInvalidArgument, "augment: --mask-out needs --mask");
  const ImageRGB image = load_image(opt.image);
  std::optional<BinaryMask> mask;
  if (opt.mask) {
    mask = load_mask(*opt.mask);
    if (mask->extent() != image.extent()) fail(ErrorKind::kData, "augment: mask and image sizes differ");
  }
  Rng rng(env.config.seed);
  const augment::Augmented result = augment::apply(image, mask, env.config.augment, rng);
  ensure_parent(opt.out);
  save_png(opt.out, result.image);
  if (opt.mask_out) {
    ensure_parent(*opt.mask_out);
    save_png(*opt.mask_out, *result.mask);
  }
  return kExitOk;
}

}  // namespace mitodet::cli
