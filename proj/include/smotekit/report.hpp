#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "smotekit/evaluate.hpp"
#include "smotekit/pipeline.hpp"
#include "smotekit/resample.hpp"

namespace smotekit {

/// Curves, their AUCs and the combined hull, ready to be written out.
struct RocReport {
    std::vector<RocCurve> curves;
    std::vector<double> aucs;
    std::vector<HullVertex> hull;
    LeftAnchor anchor = LeftAnchor::origin;
};

RocReport make_roc_report(std::vector<RocCurve> curves, LeftAnchor anchor);

/// Reads "family,fp_rate,tp_rate[,tag]" rows (extra columns such as on_hull
/// are ignored). Curves keep first-appearance order.
std::vector<RocCurve> read_roc_points(std::istream& in);
std::vector<RocCurve> load_roc_points(const std::filesystem::path& path);

/// family,tag,fp_rate,tp_rate,on_hull
void write_roc_points_csv(const RocReport& report, std::ostream& out);
/// family,tag,fp_rate,tp_rate
void write_hull_csv(const RocReport& report, std::ostream& out);
std::string roc_summary_json(const RocReport& report);

/// Vertex count per key; `key_of` maps a curve label to its grouping key.
std::map<std::string, std::size_t> hull_vertices_by(const std::vector<HullVertex>& hull,
                                                    std::string (*key_of)(std::string_view));

/// roc_points.csv, hull.csv, summary.json.
void emit_roc_report(const RocReport& report, const std::filesystem::path& out_dir);

std::string experiment_summary_json(const ExperimentResult& result);

/// roc_points.csv, hull.csv, cells.csv, summary.json and manifest.json.
/// Only the manifest carries a timestamp. `input_json` (a JSON object) is
/// copied into the manifest so the run can be repeated from it.
void emit_report(const ExperimentResult& result, const std::filesystem::path& out_dir,
                 std::string_view input_json = "{}");

/// Augmented rows as CSV plus one JSON line per synthetic row:
/// {"row", "base_index", "neighbor_index", "gap", "variant"}.
void write_augmented(const AugmentedDataset& aug, Variant variant, const std::filesystem::path& csv_path,
                     const std::filesystem::path& provenance_path);

}  // namespace smotekit
