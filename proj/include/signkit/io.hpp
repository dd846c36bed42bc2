#pragma once

#include <span>
#include <string>
#include <vector>

#include "signkit/augment.hpp"
#include "signkit/dataset.hpp"
#include "signkit/detector.hpp"
#include "signkit/evalkit.hpp"
#include "signkit/mapsim.hpp"
#include "signkit/oracle.hpp"
#include "signkit/refine.hpp"
#include "signkit/targets.hpp"

namespace signkit {

// JSON/CSV file formats used by the CLI. All loaders throw IoError when the
// file cannot be read and DataError when it does not match the schema;
// unknown fields are ignored so writers may add traceability metadata.

DatasetFile load_dataset(const std::string& path);
void save_dataset(const std::string& path, const DatasetFile& dataset);

// Augmented dataset: regular dataset schema, with per-image "source_id",
// "augment_index" and "homography" fields for traceability.
void save_augmented_dataset(const std::string& path, const AugmentedDataset& augmented);

GridSpec load_grid_spec(const std::string& path);
void save_grid_spec(const std::string& path, const GridSpec& spec);

OracleConfig load_oracle_config(const std::string& path);
AugmentConfig load_augment_config(const std::string& path);
EvalConfig load_eval_config(const std::string& path);
RefineConfig load_refine_config(const std::string& path);
SimScene load_sim_scene(const std::string& path);

// Predictions: JSON header (grid_spec, class_count) plus per-image box
// records, either inline ("boxes") or in a raw little-endian float32 sidecar
// referenced by file name relative to the JSON document.
PredictionSet load_predictions(const std::string& path);
void save_predictions(const std::string& path, const PredictionSet& predictions,
                      const std::string& sidecar_name = "");

DetectionSet load_detections(const std::string& path);
void save_detections(const std::string& path, const DetectionSet& detections);

void save_eval_report(const std::string& path, const EvalReport& report);

// CSV columns: iou,map,ap_rectangle,ap_diamond,ap_octagon (absent values empty).
void save_sweep_csv(const std::string& path, std::span<const SweepRow> rows);

std::vector<NamedTemplate> load_template_set(const std::string& path);
void save_template_set(const std::string& path, std::span<const NamedTemplate> templates);

void save_default_boxes(const std::string& path, const GridSpec& spec,
                        std::span<const DefaultBox> boxes);

// Boundary polygon for the refine subcommand: {"boundary": [[x,y], ...]}.
std::vector<Point2> load_boundary(const std::string& path);
void save_refine_result(const std::string& path, const RefineResult& result);

// Match-result fixtures: {"roles":[0|1|2,...], "gt":[...], "k_positive",
// "k_negative"} with roles encoded negative=0, positive=1, ignored=2.
MatchResult load_match_result(const std::string& path);
void save_match_result(const std::string& path, const MatchResult& match);

void save_mapsim_csv(const std::string& path, std::span<const AggregateRow> rows);

}  // namespace signkit
