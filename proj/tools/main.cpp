#include <cstdint>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "signkit/io.hpp"
#include "signkit/pgm.hpp"

namespace {

using namespace signkit;

void emit_error(const std::string& code, const std::string& message) {
  nlohmann::json err{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
}

struct SeedOption {
  std::uint64_t value = 0;
  bool provided = false;
};

void add_seed(CLI::App* cmd, SeedOption& seed) {
  cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&seed](std::uint64_t v) {
        seed.value = v;
        seed.provided = true;
      },
      "override the config RNG seed");
}

int run_templates_dump(const std::string& out) {
  const auto set = builtin_template_set();
  save_template_set(out, set);
  return 0;
}

int run_anchors_gen(const std::string& config, const std::string& out) {
  const GridSpec spec = load_grid_spec(config);
  const auto boxes = generate_default_boxes(spec);
  save_default_boxes(out, spec, boxes);
  return 0;
}

int run_synth(const std::string& config, const SeedOption& seed, const std::string& out) {
  OracleConfig cfg = load_oracle_config(config);
  if (seed.provided) cfg.rng_seed = seed.value;
  save_dataset(out, generate_synthetic_dataset(cfg));
  return 0;
}

int run_predict_oracle(const std::string& dataset_path, const std::string& grid_path,
                       double sigma, double margin, const SeedOption& seed,
                       const std::string& out, const std::string& sidecar) {
  const DatasetFile dataset = load_dataset(dataset_path);
  const GridSpec spec = load_grid_spec(grid_path);
  const PredictionSet preds =
      oracle_predict(dataset, spec, sigma, margin, seed.value);
  save_predictions(out, preds, sidecar);
  return 0;
}

DetectionSet detect_all(const PredictionSet& preds, double score_threshold,
                        double nms_iou) {
  DetectionSet out;
  for (const auto& img : preds.images) {
    DetectedImage entry;
    entry.id = img.id;
    entry.detections =
        nms(decode_predictions(img.grid, preds.grid_spec, score_threshold), nms_iou);
    out.images.push_back(std::move(entry));
  }
  return out;
}

int run_detect(const std::string& pred_path, double score_threshold, double nms_iou,
               const std::string& out) {
  save_detections(out, detect_all(load_predictions(pred_path), score_threshold, nms_iou));
  return 0;
}

int run_detect_crop_resize(const std::string& crop_path, const std::string& half_path,
                           int image_width, int image_height, double score_threshold,
                           double nms_iou, const std::string& out) {
  const DetectionSet crop =
      detect_all(load_predictions(crop_path), score_threshold, nms_iou);
  const DetectionSet half =
      detect_all(load_predictions(half_path), score_threshold, nms_iou);

  std::map<std::string, const std::vector<Detection>*> half_by_id;
  for (const auto& img : half.images) half_by_id[img.id] = &img.detections;

  DetectionSet merged;
  for (const auto& img : crop.images) {
    const auto it = half_by_id.find(img.id);
    if (it == half_by_id.end()) {
      throw DataError("half-resolution predictions missing image '" + img.id + "'");
    }
    DetectedImage entry;
    entry.id = img.id;
    entry.detections =
        crop_resize_merge(img.detections, *it->second, image_width, image_height, nms_iou);
    merged.images.push_back(std::move(entry));
  }
  save_detections(out, merged);
  return 0;
}

int run_refine(const std::string& patch_path, const std::string& boundary_path,
               const std::string& config, const std::string& out) {
  const GrayPatch patch = read_pgm(patch_path);
  const auto boundary = load_boundary(boundary_path);
  RefineConfig cfg;
  if (!config.empty()) cfg = load_refine_config(config);
  save_refine_result(out, refine_boundary(patch, boundary, cfg));
  return 0;
}

int run_eval(const std::string& pred_path, const std::string& gt_path,
             const std::string& config, const std::string& out,
             const std::string& sweep_path) {
  const DetectionSet dets = load_detections(pred_path);
  const DatasetFile gt = load_dataset(gt_path);
  EvalConfig cfg;
  if (!config.empty()) cfg = load_eval_config(config);
  save_eval_report(out, evaluate(dets, gt, cfg));
  if (!sweep_path.empty()) {
    const auto rows = map_vs_iou_sweep(dets, gt, cfg);
    save_sweep_csv(sweep_path, rows);
  }
  return 0;
}

int run_augment(const std::string& dataset_path, const std::string& config,
                const SeedOption& seed, const std::string& out) {
  const DatasetFile dataset = load_dataset(dataset_path);
  AugmentConfig cfg;
  if (!config.empty()) cfg = load_augment_config(config);
  if (seed.provided) cfg.rng_seed = seed.value;
  save_augmented_dataset(out, augment_dataset(dataset, cfg));
  return 0;
}

int run_mapsim(const std::string& config, const SeedOption& seed, const std::string& out) {
  SimScene scene;
  if (!config.empty()) scene = load_sim_scene(config);
  if (seed.provided) scene.rng_seed = seed.value;
  save_mapsim_csv(out, run_experiment(scene));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"traffic-sign boundary detection toolkit"};
  app.require_subcommand(1);

  SeedOption seed;

  // templates dump
  auto* templates = app.add_subcommand("templates", "shape template database");
  templates->require_subcommand(1);
  auto* dump = templates->add_subcommand("dump", "write the built-in template set");
  std::string templates_out;
  dump->add_option("--out", templates_out, "output JSON path")->required();

  // anchors gen
  auto* anchors = app.add_subcommand("anchors", "default-box grids");
  anchors->require_subcommand(1);
  auto* gen = anchors->add_subcommand("gen", "generate default boxes for a grid spec");
  std::string anchors_config, anchors_out;
  gen->add_option("--config", anchors_config, "grid spec JSON")->required();
  gen->add_option("--out", anchors_out, "output JSON path")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic annotated dataset");
  std::string synth_config, synth_out;
  synth->add_option("--config", synth_config, "oracle config JSON")->required();
  add_seed(synth, seed);
  synth->add_option("--out", synth_out, "output dataset JSON")->required();

  // predict-oracle
  auto* predict = app.add_subcommand(
      "predict-oracle", "synthesize prediction grids from ground truth");
  std::string po_dataset, po_grid, po_out, po_sidecar;
  double po_sigma = 0.0, po_margin = 10.0;
  predict->add_option("--dataset", po_dataset, "dataset JSON")->required();
  predict->add_option("--grid", po_grid, "grid spec JSON")->required();
  predict->add_option("--sigma", po_sigma, "per-corner prediction noise (px)");
  predict->add_option("--logit-margin", po_margin, "one-hot logit magnitude");
  add_seed(predict, seed);
  predict->add_option("--out", po_out, "output predictions JSON")->required();
  predict->add_option("--sidecar", po_sidecar,
                      "write bulk records to this raw float32 sidecar");

  // detect
  auto* detect = app.add_subcommand("detect", "decode predictions, NMS, boundaries");
  std::string det_pred, det_out, det_pred_crop, det_pred_half;
  double det_score = 0.5, det_nms = 0.45;
  bool det_crop_resize = false;
  int det_w = 0, det_h = 0;
  detect->add_option("--pred", det_pred, "predictions JSON");
  detect->add_option("--score-threshold", det_score, "detection score threshold");
  detect->add_option("--nms-iou", det_nms, "NMS IoU threshold");
  detect->add_flag("--crop-resize", det_crop_resize,
                   "merge a crop branch and a half-resolution branch");
  detect->add_option("--pred-crop", det_pred_crop, "crop-branch predictions JSON");
  detect->add_option("--pred-half", det_pred_half, "half-branch predictions JSON");
  detect->add_option("--image-width", det_w, "full image width (crop-resize)");
  detect->add_option("--image-height", det_h, "full image height (crop-resize)");
  detect->add_option("--out", det_out, "output detections JSON")->required();

  // refine
  auto* refine = app.add_subcommand("refine", "image-based boundary refinement");
  std::string rf_patch, rf_boundary, rf_config, rf_out;
  refine->add_option("--patch", rf_patch, "gray patch (binary PGM)")->required();
  refine->add_option("--boundary", rf_boundary, "boundary JSON")->required();
  refine->add_option("--config", rf_config, "refine config JSON");
  refine->add_option("--out", rf_out, "output JSON")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "detection metrics");
  std::string ev_pred, ev_gt, ev_config, ev_out, ev_sweep;
  eval->add_option("--pred", ev_pred, "detections JSON")->required();
  eval->add_option("--gt", ev_gt, "ground-truth dataset JSON")->required();
  eval->add_option("--config", ev_config, "eval config JSON");
  eval->add_option("--out", ev_out, "report JSON")->required();
  eval->add_option("--sweep", ev_sweep, "also write the mAP-vs-IoU sweep CSV here");

  // augment
  auto* augment = app.add_subcommand("augment", "perspective augmentation");
  std::string aug_dataset, aug_config, aug_out;
  augment->add_option("--dataset", aug_dataset, "dataset JSON")->required();
  augment->add_option("--config", aug_config, "augment config JSON");
  add_seed(augment, seed);
  augment->add_option("--out", aug_out, "output augmented dataset JSON")->required();

  // mapsim
  auto* mapsim = app.add_subcommand("mapsim", "two-view mapping-accuracy simulation");
  std::string ms_config, ms_out;
  mapsim->add_option("--config", ms_config, "scene config JSON");
  add_seed(mapsim, seed);
  mapsim->add_option("--out", ms_out, "output CSV")->required();

  try {
    app.parse(argc, argv);

    if (dump->parsed()) return run_templates_dump(templates_out);
    if (gen->parsed()) return run_anchors_gen(anchors_config, anchors_out);
    if (synth->parsed()) return run_synth(synth_config, seed, synth_out);
    if (predict->parsed()) {
      return run_predict_oracle(po_dataset, po_grid, po_sigma, po_margin, seed, po_out,
                                po_sidecar);
    }
    if (detect->parsed()) {
      if (det_crop_resize) {
        if (det_pred_crop.empty() || det_pred_half.empty() || det_w <= 0 || det_h <= 0) {
          emit_error("usage", "--crop-resize needs --pred-crop, --pred-half and image dims");
          return 1;
        }
        return run_detect_crop_resize(det_pred_crop, det_pred_half, det_w, det_h,
                                      det_score, det_nms, det_out);
      }
      if (det_pred.empty()) {
        emit_error("usage", "detect needs --pred (or --crop-resize inputs)");
        return 1;
      }
      return run_detect(det_pred, det_score, det_nms, det_out);
    }
    if (refine->parsed()) return run_refine(rf_patch, rf_boundary, rf_config, rf_out);
    if (eval->parsed()) return run_eval(ev_pred, ev_gt, ev_config, ev_out, ev_sweep);
    if (augment->parsed()) return run_augment(aug_dataset, aug_config, seed, aug_out);
    if (mapsim->parsed()) return run_mapsim(ms_config, seed, ms_out);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    emit_error(e.code(), e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal_error", e.what());
    return 2;
  }
}
