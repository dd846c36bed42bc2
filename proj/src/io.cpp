#include "signkit/io.hpp"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "sidecar float encoding assumes a little-endian host");

namespace signkit {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

json point_to_json(const Point2& p) { return json::array({p.x, p.y}); }

Point2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw DataError("expected [x, y] point");
  return {j[0].get<double>(), j[1].get<double>()};
}

json points_to_json(std::span<const Point2> pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(point_to_json(p));
  return out;
}

std::vector<Point2> points_from_json(const json& j) {
  std::vector<Point2> out;
  for (const auto& e : j) out.push_back(point_from_json(e));
  return out;
}

Quad quad_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw DataError("expected 4 quad vertices");
  return {point_from_json(j[0]), point_from_json(j[1]), point_from_json(j[2]),
          point_from_json(j[3])};
}

json sign_to_json(const GroundTruthSign& sign) {
  json out;
  out["shape"] = to_label(sign.shape);
  out["boundary"] = points_to_json(sign.boundary);
  out["template_vertices"] = points_to_json(sign.template_vertices);
  out["difficult"] = sign.difficult;
  return out;
}

GroundTruthSign sign_from_json(const json& j) {
  GroundTruthSign sign;
  sign.shape = shape_from_label(j.at("shape").get<std::string>());
  sign.boundary = points_from_json(j.at("boundary"));
  if (j.contains("template_vertices")) {
    sign.template_vertices = quad_from_json(j.at("template_vertices"));
  } else {
    sign.template_vertices = boundary_to_template_vertices(sign.boundary, sign.shape);
  }
  sign.difficult = j.value("difficult", false);
  return sign;
}

json image_to_json(const AnnotatedImage& image) {
  json out;
  out["id"] = image.id;
  out["width"] = image.width;
  out["height"] = image.height;
  json signs = json::array();
  for (const auto& sign : image.signs) signs.push_back(sign_to_json(sign));
  out["signs"] = std::move(signs);
  if (!image.payload.empty()) out["payload"] = image.payload;
  return out;
}

AnnotatedImage image_from_json(const json& j) {
  AnnotatedImage image;
  image.id = j.at("id").get<std::string>();
  image.width = j.at("width").get<int>();
  image.height = j.at("height").get<int>();
  for (const auto& s : j.value("signs", json::array())) {
    image.signs.push_back(sign_from_json(s));
  }
  image.payload = j.value("payload", std::string());
  return image;
}

json grid_spec_to_json(const GridSpec& spec) {
  json out;
  out["input_width"] = spec.input_width;
  out["input_height"] = spec.input_height;
  out["layer_strides"] = spec.layer_strides;
  out["aspect_ratios"] = spec.aspect_ratios;
  out["scale_factor"] = spec.scale_factor;
  out["normalize_offsets"] = spec.normalize_offsets;
  return out;
}

GridSpec grid_spec_from_json(const json& j) {
  GridSpec spec;
  spec.input_width = j.at("input_width").get<int>();
  spec.input_height = j.at("input_height").get<int>();
  spec.layer_strides = j.value("layer_strides", spec.layer_strides);
  spec.aspect_ratios = j.value("aspect_ratios", spec.aspect_ratios);
  spec.scale_factor = j.value("scale_factor", spec.scale_factor);
  spec.normalize_offsets = j.value("normalize_offsets", spec.normalize_offsets);
  return spec;
}

json homography_to_json(const Homography& h) {
  return json(std::vector<double>(h.m.begin(), h.m.end()));
}

json detection_to_json(const Detection& det) {
  json out;
  out["shape"] = to_label(det.shape);
  out["score"] = det.score;
  out["quad"] = points_to_json(det.quad);
  out["boundary"] = points_to_json(det.boundary);
  out["bbox"] = json::array({det.bbox.left, det.bbox.top, det.bbox.right, det.bbox.bottom});
  return out;
}

Detection detection_from_json(const json& j) {
  Detection det;
  det.shape = shape_from_label(j.at("shape").get<std::string>());
  det.score = j.at("score").get<double>();
  det.quad = quad_from_json(j.at("quad"));
  det.boundary = points_from_json(j.at("boundary"));
  const auto& b = j.at("bbox");
  if (!b.is_array() || b.size() != 4) throw DataError("expected bbox [l,t,r,b]");
  det.bbox = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
              b[3].get<double>()};
  return det;
}

std::string threshold_key(double t) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", t);
  return buf;
}

// Seeded configs may pin the RNG algorithm; reject mismatches so sequences
// stay reproducible across implementations.
void check_rng_algorithm(const json& j, const std::string& path) {
  if (!j.contains("rng_algorithm")) return;
  const auto declared = j.at("rng_algorithm").get<std::string>();
  if (declared != Rng::kAlgorithm) {
    throw DataError(path + ": rng_algorithm '" + declared + "' is not supported (this build: " +
                    std::string(Rng::kAlgorithm) + ")");
  }
}

}  // namespace

DatasetFile load_dataset(const std::string& path) {
  const json j = parse_file(path);
  DatasetFile dataset;
  try {
    for (const auto& img : j.at("images")) dataset.images.push_back(image_from_json(img));
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  validate_dataset(dataset);
  return dataset;
}

void save_dataset(const std::string& path, const DatasetFile& dataset) {
  json images = json::array();
  for (const auto& image : dataset.images) images.push_back(image_to_json(image));
  write_file(path, json{{"images", std::move(images)}});
}

void save_augmented_dataset(const std::string& path, const AugmentedDataset& augmented) {
  json images = json::array();
  for (std::size_t i = 0; i < augmented.dataset.images.size(); ++i) {
    json img = image_to_json(augmented.dataset.images[i]);
    const AugmentRecord& record = augmented.records[i];
    img["source_id"] = record.source_id;
    img["augment_index"] = record.index;
    img["homography"] = homography_to_json(record.h);
    images.push_back(std::move(img));
  }
  write_file(path, json{{"images", std::move(images)}});
}

GridSpec load_grid_spec(const std::string& path) {
  const json j = parse_file(path);
  try {
    return grid_spec_from_json(j.contains("grid_spec") ? j.at("grid_spec") : j);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void save_grid_spec(const std::string& path, const GridSpec& spec) {
  write_file(path, grid_spec_to_json(spec));
}

OracleConfig load_oracle_config(const std::string& path) {
  const json j = parse_file(path);
  check_rng_algorithm(j, path);
  OracleConfig cfg;
  try {
    cfg.scene_count = j.value("scene_count", cfg.scene_count);
    cfg.image_width = j.value("image_width", cfg.image_width);
    cfg.image_height = j.value("image_height", cfg.image_height);
    cfg.signs_per_image = j.value("signs_per_image", cfg.signs_per_image);
    cfg.size_range = j.value("size_range", cfg.size_range);
    cfg.perspective_jitter = j.value("perspective_jitter", cfg.perspective_jitter);
    cfg.sigma_pred = j.value("sigma_pred", cfg.sigma_pred);
    cfg.logit_margin = j.value("logit_margin", cfg.logit_margin);
    cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
    if (j.contains("shapes")) {
      cfg.shapes.clear();
      for (const auto& s : j.at("shapes")) {
        cfg.shapes.push_back(shape_from_label(s.get<std::string>()));
      }
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return cfg;
}

AugmentConfig load_augment_config(const std::string& path) {
  const json j = parse_file(path);
  check_rng_algorithm(j, path);
  AugmentConfig cfg;
  cfg.duplicates_per_image = j.value("duplicates_per_image", cfg.duplicates_per_image);
  cfg.large_sign_min_side = j.value("large_sign_min_side", cfg.large_sign_min_side);
  cfg.border_margin = j.value("border_margin", cfg.border_margin);
  cfg.max_regenerate_attempts =
      j.value("max_regenerate_attempts", cfg.max_regenerate_attempts);
  cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
  return cfg;
}

EvalConfig load_eval_config(const std::string& path) {
  const json j = parse_file(path);
  EvalConfig cfg;
  cfg.iou_thresholds = j.value("iou_thresholds", cfg.iou_thresholds);
  cfg.min_side_px = j.value("min_side_px", cfg.min_side_px);
  cfg.ave_match_iou = j.value("ave_match_iou", cfg.ave_match_iou);
  return cfg;
}

RefineConfig load_refine_config(const std::string& path) {
  const json j = parse_file(path);
  RefineConfig cfg;
  cfg.samples_per_edge = j.value("samples_per_edge", cfg.samples_per_edge);
  cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
  cfg.step_tolerance = j.value("step_tolerance", cfg.step_tolerance);
  cfg.discard_threshold = j.value("discard_threshold", cfg.discard_threshold);
  cfg.translation_radius = j.value("translation_radius", cfg.translation_radius);
  cfg.linear_radius = j.value("linear_radius", cfg.linear_radius);
  return cfg;
}

SimScene load_sim_scene(const std::string& path) {
  const json j = parse_file(path);
  check_rng_algorithm(j, path);
  SimScene scene;
  auto point3 = [](const json& v, Point3 fallback) {
    if (v.is_null()) return fallback;
    return Point3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  };
  scene.sign_center = point3(j.value("sign_center", json()), scene.sign_center);
  scene.sign_width = j.value("sign_width", scene.sign_width);
  scene.sign_height = j.value("sign_height", scene.sign_height);
  scene.cam1_position = point3(j.value("cam1_position", json()), scene.cam1_position);
  scene.cam2_position = point3(j.value("cam2_position", json()), scene.cam2_position);
  scene.focal = j.value("focal", scene.focal);
  scene.image_width = j.value("image_width", scene.image_width);
  scene.image_height = j.value("image_height", scene.image_height);
  scene.noise_std = j.value("noise_std", scene.noise_std);
  scene.trials = j.value("trials", scene.trials);
  scene.theta_steps = j.value("theta_steps", scene.theta_steps);
  scene.theta_min_deg = j.value("theta_min_deg", scene.theta_min_deg);
  scene.theta_max_deg = j.value("theta_max_deg", scene.theta_max_deg);
  scene.rng_seed = j.value("rng_seed", scene.rng_seed);
  return scene;
}

PredictionSet load_predictions(const std::string& path) {
  const json j = parse_file(path);
  PredictionSet set;
  try {
    set.grid_spec = grid_spec_from_json(j.at("grid_spec"));
    set.class_count = j.at("class_count").get<int>();

    if (j.contains("sidecar")) {
      const std::filesystem::path sidecar =
          std::filesystem::path(path).parent_path() / j.at("sidecar").get<std::string>();
      std::ifstream bin(sidecar, std::ios::binary);
      if (!bin) throw IoError("cannot open sidecar " + sidecar.string());
      const std::size_t record = static_cast<std::size_t>(set.class_count) + 8;
      for (const auto& img : j.at("images")) {
        ImagePredictions entry;
        entry.id = img.at("id").get<std::string>();
        entry.grid.class_count = set.class_count;
        const auto count = img.at("box_count").get<std::size_t>();
        std::vector<float> buffer(record);
        for (std::size_t b = 0; b < count; ++b) {
          bin.read(reinterpret_cast<char*>(buffer.data()),
                   static_cast<std::streamsize>(buffer.size() * sizeof(float)));
          if (!bin) throw DataError(sidecar.string() + ": truncated record stream");
          BoxPrediction pred;
          pred.logits.assign(buffer.begin(),
                             buffer.begin() + static_cast<long>(set.class_count));
          for (std::size_t c = 0; c < 8; ++c) {
            pred.dp.v[c] = buffer[static_cast<std::size_t>(set.class_count) + c];
          }
          entry.grid.boxes.push_back(std::move(pred));
        }
        set.images.push_back(std::move(entry));
      }
    } else {
      for (const auto& img : j.at("images")) {
        ImagePredictions entry;
        entry.id = img.at("id").get<std::string>();
        entry.grid.class_count = set.class_count;
        for (const auto& box : img.at("boxes")) {
          BoxPrediction pred;
          pred.logits = box.at("logits").get<std::vector<double>>();
          const auto dp = box.at("dp").get<std::vector<double>>();
          if (pred.logits.size() != static_cast<std::size_t>(set.class_count) ||
              dp.size() != 8) {
            throw DataError(path + ": box record has wrong logits/dp arity");
          }
          std::copy(dp.begin(), dp.end(), pred.dp.v.begin());
          entry.grid.boxes.push_back(std::move(pred));
        }
        set.images.push_back(std::move(entry));
      }
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return set;
}

void save_predictions(const std::string& path, const PredictionSet& predictions,
                      const std::string& sidecar_name) {
  json out;
  out["grid_spec"] = grid_spec_to_json(predictions.grid_spec);
  out["class_count"] = predictions.class_count;

  if (!sidecar_name.empty()) {
    const std::filesystem::path sidecar =
        std::filesystem::path(path).parent_path() / sidecar_name;
    std::ofstream bin(sidecar, std::ios::binary);
    if (!bin) throw IoError("cannot open sidecar " + sidecar.string() + " for writing");
    json images = json::array();
    for (const auto& img : predictions.images) {
      for (const auto& box : img.grid.boxes) {
        std::vector<float> buffer;
        buffer.reserve(box.logits.size() + 8);
        for (double v : box.logits) buffer.push_back(static_cast<float>(v));
        for (double v : box.dp.v) buffer.push_back(static_cast<float>(v));
        bin.write(reinterpret_cast<const char*>(buffer.data()),
                  static_cast<std::streamsize>(buffer.size() * sizeof(float)));
      }
      images.push_back(json{{"id", img.id}, {"box_count", img.grid.boxes.size()}});
    }
    out["sidecar"] = sidecar_name;
    out["images"] = std::move(images);
  } else {
    json images = json::array();
    for (const auto& img : predictions.images) {
      json boxes = json::array();
      for (const auto& box : img.grid.boxes) {
        boxes.push_back(json{{"logits", box.logits},
                             {"dp", std::vector<double>(box.dp.v.begin(), box.dp.v.end())}});
      }
      images.push_back(json{{"id", img.id}, {"boxes", std::move(boxes)}});
    }
    out["images"] = std::move(images);
  }
  write_file(path, out);
}

DetectionSet load_detections(const std::string& path) {
  const json j = parse_file(path);
  DetectionSet set;
  try {
    for (const auto& img : j.at("images")) {
      DetectedImage entry;
      entry.id = img.at("id").get<std::string>();
      for (const auto& d : img.value("detections", json::array())) {
        entry.detections.push_back(detection_from_json(d));
      }
      set.images.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return set;
}

void save_detections(const std::string& path, const DetectionSet& detections) {
  json images = json::array();
  for (const auto& img : detections.images) {
    json dets = json::array();
    for (const auto& d : img.detections) dets.push_back(detection_to_json(d));
    images.push_back(json{{"id", img.id}, {"detections", std::move(dets)}});
  }
  write_file(path, json{{"images", std::move(images)}});
}

void save_eval_report(const std::string& path, const EvalReport& report) {
  json out;
  out["config"] = {{"iou_thresholds", report.config.iou_thresholds},
                   {"min_side_px", report.config.min_side_px},
                   {"ave_match_iou", report.config.ave_match_iou}};
  json shapes = json::array();
  for (const auto& shape : report.shapes) {
    json s;
    s["shape"] = to_label(shape.shape);
    s["gt_count"] = shape.gt_count;
    s["tp"] = shape.true_positives;
    s["fp"] = shape.false_positives;
    s["fn"] = shape.false_negatives;
    s["precision"] = shape.precision;
    s["recall"] = shape.recall;
    json ap;
    for (const auto& [t, value] : shape.ap_by_iou) {
      ap[threshold_key(t)] = value ? json(*value) : json();
    }
    s["ap"] = std::move(ap);
    s["ave"] = shape.ave ? json(*shape.ave) : json();
    shapes.push_back(std::move(s));
  }
  out["shapes"] = std::move(shapes);
  json map;
  for (const auto& [t, value] : report.map_by_iou) {
    map[threshold_key(t)] = value ? json(*value) : json();
  }
  out["map"] = std::move(map);
  out["ave"] = report.ave ? json(*report.ave) : json();
  json matches = json::array();
  for (const auto& m : report.matches) {
    matches.push_back(json{
        {"image", m.image_id}, {"det", m.det_index}, {"gt", m.gt_index}, {"iou", m.iou}});
  }
  out["matches"] = std::move(matches);
  write_file(path, out);
}

void save_sweep_csv(const std::string& path, std::span<const SweepRow> rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "iou,map,ap_rectangle,ap_diamond,ap_octagon\n";
  out.precision(12);
  for (const auto& row : rows) {
    out << row.iou << ',';
    if (row.map) out << *row.map;
    for (ShapeClass s :
         {ShapeClass::Rectangle, ShapeClass::Diamond, ShapeClass::Octagon}) {
      out << ',';
      const auto it = row.shape_ap.find(s);
      if (it != row.shape_ap.end() && it->second) out << *it->second;
    }
    out << '\n';
  }
}

std::vector<NamedTemplate> load_template_set(const std::string& path) {
  const json j = parse_file(path);
  std::vector<NamedTemplate> set;
  try {
    for (const auto& t : j.at("templates")) {
      NamedTemplate entry;
      entry.label = t.at("shape").get<std::string>();
      entry.corners = points_from_json(t.at("corners"));
      set.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return set;
}

void save_template_set(const std::string& path, std::span<const NamedTemplate> templates) {
  json entries = json::array();
  for (const auto& t : templates) {
    entries.push_back(json{{"shape", t.label}, {"corners", points_to_json(t.corners)}});
  }
  write_file(path, json{{"templates", std::move(entries)}});
}

void save_default_boxes(const std::string& path, const GridSpec& spec,
                        std::span<const DefaultBox> boxes) {
  json out;
  out["grid_spec"] = grid_spec_to_json(spec);
  out["count"] = boxes.size();
  json list = json::array();
  for (const auto& b : boxes) {
    list.push_back(json{{"cx", b.cx},
                        {"cy", b.cy},
                        {"w", b.w},
                        {"h", b.h},
                        {"layer", b.layer_index},
                        {"row", b.cell_row},
                        {"col", b.cell_col},
                        {"ratio", b.ratio_index}});
  }
  out["boxes"] = std::move(list);
  write_file(path, out);
}

std::vector<Point2> load_boundary(const std::string& path) {
  const json j = parse_file(path);
  try {
    return points_from_json(j.is_array() ? j : j.at("boundary"));
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

MatchResult load_match_result(const std::string& path) {
  const json j = parse_file(path);
  MatchResult match;
  try {
    for (const auto& r : j.at("roles")) {
      const int v = r.get<int>();
      if (v < 0 || v > 2) throw DataError(path + ": role out of range");
      match.role.push_back(static_cast<BoxRole>(v));
    }
    match.gt_index = j.at("gt").get<std::vector<int>>();
    match.k_positive = j.at("k_positive").get<int>();
    match.k_negative = j.at("k_negative").get<int>();
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  if (match.gt_index.size() != match.role.size()) {
    throw DataError(path + ": roles and gt arrays disagree in length");
  }
  return match;
}

void save_match_result(const std::string& path, const MatchResult& match) {
  json roles = json::array();
  for (BoxRole r : match.role) roles.push_back(static_cast<int>(r));
  write_file(path, json{{"roles", std::move(roles)},
                        {"gt", match.gt_index},
                        {"k_positive", match.k_positive},
                        {"k_negative", match.k_negative}});
}

void save_refine_result(const std::string& path, const RefineResult& result) {
  json out;
  out["boundary"] = points_to_json(result.boundary);
  out["accepted"] = result.accepted;
  out["energy_before"] = result.energy_before;
  out["energy_after"] = result.energy_after;
  write_file(path, out);
}

void save_mapsim_csv(const std::string& path, std::span<const AggregateRow> rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_experiment_csv(out, rows);
}

}  // namespace signkit
