#include "smotekit/report.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "smotekit/error.hpp"

namespace smotekit {

using nlohmann::ordered_json;

namespace {

std::string curve_kind(std::string_view curve) { return std::string(curve.substr(0, curve.find('@'))); }
std::string curve_label(std::string_view curve) { return std::string(curve); }

bool on_hull(const std::vector<HullVertex>& hull, const RocPoint& p) {
    for (const auto& h : hull) {
        if (h.point.fp_rate == p.fp_rate && h.point.tp_rate == p.tp_rate) return true;
    }
    return false;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    auto out = open_out(p);
    out << content;
    if (!out) throw IoError("write failed: " + p.string());
}

void prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

ordered_json hull_json(const std::vector<HullVertex>& hull) {
    ordered_json arr = ordered_json::array();
    for (const auto& h : hull) {
        arr.push_back({{"family", h.family},
                       {"tag", h.point.tag},
                       {"fp_rate", h.point.fp_rate},
                       {"tp_rate", h.point.tp_rate}});
    }
    return arr;
}

}  // namespace

RocReport make_roc_report(std::vector<RocCurve> curves, LeftAnchor anchor) {
    RocReport r;
    r.anchor = anchor;
    for (auto& c : curves) {
        sort_points(c.points);
        r.aucs.push_back(auc(c, anchor));
    }
    r.curves = std::move(curves);
    r.hull = convex_hull(r.curves);
    return r;
}

std::vector<RocCurve> read_roc_points(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("ROC point file is empty");
    const auto header = split_csv_record(line);
    auto find = [&](std::string_view name) -> long {
        for (std::size_t i = 0; i < header.size(); ++i) {
            std::string h = header[i];
            while (!h.empty() && (h.back() == '\r' || h.back() == ' ')) h.pop_back();
            if (h == name) return static_cast<long>(i);
        }
        return -1;
    };
    const long fam = find("family"), fp = find("fp_rate"), tp = find("tp_rate"), tag = find("tag");
    if (fam < 0 || fp < 0 || tp < 0) {
        throw DataError("ROC point file needs family, fp_rate and tp_rate columns");
    }
    std::vector<RocCurve> curves;
    std::unordered_map<std::string, std::size_t> index;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_record(line);
        if (fields.size() != header.size()) {
            throw DataError("wrong field count on line " + std::to_string(line_no));
        }
        auto number = [&](long col) {
            try {
                std::size_t used = 0;
                const double v = std::stod(fields[col], &used);
                if (used != fields[col].size()) throw std::invalid_argument("trailing");
                return v;
            } catch (const std::exception&) {
                throw DataError("non-numeric rate '" + fields[col] + "' on line " + std::to_string(line_no));
            }
        };
        RocPoint p{number(fp), number(tp), tag >= 0 ? fields[tag] : ""};
        if (!(p.fp_rate >= 0 && p.fp_rate <= 100 && p.tp_rate >= 0 && p.tp_rate <= 100)) {
            throw DataError("rate outside [0,100] on line " + std::to_string(line_no));
        }
        auto [it, inserted] = index.emplace(fields[fam], curves.size());
        if (inserted) curves.push_back(RocCurve{fields[fam], {}});
        curves[it->second].points.push_back(std::move(p));
    }
    if (curves.empty()) throw DataError("ROC point file holds no points");
    return curves;
}

std::vector<RocCurve> load_roc_points(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_roc_points(in);
}

void write_roc_points_csv(const RocReport& report, std::ostream& out) {
    out << "family,tag,fp_rate,tp_rate,on_hull\n";
    for (const auto& c : report.curves) {
        for (const auto& p : c.points) {
            out << csv_field(c.family) << ',' << csv_field(p.tag) << ',' << format_real(p.fp_rate) << ','
                << format_real(p.tp_rate) << ',' << (on_hull(report.hull, p) ? 1 : 0) << '\n';
        }
    }
}

void write_hull_csv(const RocReport& report, std::ostream& out) {
    out << "family,tag,fp_rate,tp_rate\n";
    for (const auto& h : report.hull) {
        out << csv_field(h.family) << ',' << csv_field(h.point.tag) << ',' << format_real(h.point.fp_rate) << ','
            << format_real(h.point.tp_rate) << '\n';
    }
}

std::map<std::string, std::size_t> hull_vertices_by(const std::vector<HullVertex>& hull,
                                                    std::string (*key_of)(std::string_view)) {
    std::map<std::string, std::size_t> out;
    for (const auto& h : hull) {
        if (h.family == "anchor") continue;
        ++out[key_of(h.family)];
    }
    return out;
}

namespace {

ordered_json roc_summary(const RocReport& report) {
    ordered_json j;
    j["left_anchor"] = std::string(to_string(report.anchor));
    j["curves"] = ordered_json::array();
    for (std::size_t i = 0; i < report.curves.size(); ++i) {
        j["curves"].push_back({{"family", report.curves[i].family},
                               {"points", report.curves[i].points.size()},
                               {"auc", report.aucs[i]},
                               {"auc_x10000", auc_x10000(report.aucs[i])}});
    }
    j["hull"] = hull_json(report.hull);
    const auto counts = hull_vertices_by(report.hull, &curve_label);
    j["hull_vertices_by_family"] = ordered_json::object();
    ordered_json none = ordered_json::array();
    for (const auto& c : report.curves) {
        auto it = counts.find(c.family);
        j["hull_vertices_by_family"][c.family] = it == counts.end() ? 0 : it->second;
        if (it == counts.end()) none.push_back(c.family);
    }
    j["families_without_hull_vertices"] = none;
    return j;
}

}  // namespace

std::string roc_summary_json(const RocReport& report) { return roc_summary(report).dump(2) + "\n"; }

void emit_roc_report(const RocReport& report, const std::filesystem::path& out_dir) {
    if (report.curves.empty()) throw DataError("nothing to report: no curves");
    prepare_dir(out_dir);
    {
        auto out = open_out(out_dir / "roc_points.csv");
        write_roc_points_csv(report, out);
    }
    {
        auto out = open_out(out_dir / "hull.csv");
        write_hull_csv(report, out);
    }
    write_file(out_dir / "summary.json", roc_summary_json(report));
}

std::string experiment_summary_json(const ExperimentResult& result) {
    ordered_json j;
    j["left_anchor"] = std::string(to_string(result.config.left_anchor));
    j["left_anchor_note"] = result.config.left_anchor == LeftAnchor::origin
                                ? "curves are joined to (0,0) before integration"
                                : "curves are integrated from their leftmost measured point";
    j["variant"] = std::string(to_string(result.variant));
    j["curves"] = ordered_json::array();
    for (const auto& a : result.aucs) {
        j["curves"].push_back({{"family", a.curve},
                               {"kind", std::string(to_string(a.family))},
                               {"over_percent", a.over_percent},
                               {"points", a.points},
                               {"auc", a.auc},
                               {"auc_x10000", auc_x10000(a.auc)}});
    }
    j["hull"] = hull_json(result.hull);

    const auto by_kind = hull_vertices_by(result.hull, &curve_kind);
    ordered_json kinds = ordered_json::object();
    ordered_json none = ordered_json::array();
    std::string leader;
    std::size_t best = 0;
    bool tie = false;
    for (auto fam : result.config.families) {
        const std::string name(to_string(fam));
        auto it = by_kind.find(name);
        const std::size_t n = it == by_kind.end() ? 0 : it->second;
        kinds[name] = n;
        if (n == 0) none.push_back(name);
        if (n > best) {
            best = n;
            leader = name;
            tie = false;
        } else if (n == best && n > 0) {
            tie = true;
        }
    }
    j["hull_vertices_by_kind"] = kinds;
    j["kinds_without_hull_vertices"] = none;
    j["most_hull_vertices"] = best == 0 ? "none" : (tie ? "tie" : leader);

    // SMOTE + under-sampling against plain under-sampling, when both ran.
    const CurveSummary* plain = nullptr;
    const CurveSummary* best_smote = nullptr;
    for (const auto& a : result.aucs) {
        if (a.family == Family::plain_under) plain = &a;
        if (a.family == Family::smote_under && (!best_smote || a.auc > best_smote->auc)) best_smote = &a;
    }
    if (plain && best_smote) {
        const double delta = best_smote->auc - plain->auc;
        j["smote_vs_under"] = {{"plain_under_auc", plain->auc},
                               {"best_smote_under", best_smote->curve},
                               {"best_smote_under_auc", best_smote->auc},
                               {"auc_difference", delta},
                               {"smote_not_worse_within_0_02", delta >= -0.02}};
    }

    ordered_json skipped = ordered_json::array();
    for (const auto& c : result.cells) {
        if (c.skipped) skipped.push_back({{"family", c.curve}, {"tag", c.tag}, {"reason", c.skip_reason}});
    }
    j["skipped_cells"] = skipped;
    j["warnings"] = result.warnings;
    j["audit"] = {{"synthetic_rows_checked", result.audited_synthetic_rows}, {"test_fold_references", 0}};
    return j.dump(2) + "\n";
}

void emit_report(const ExperimentResult& result, const std::filesystem::path& out_dir, std::string_view input_json) {
    if (result.config.families.empty() || result.curves.empty()) {
        throw DataError("nothing to report: no families were evaluated");
    }
    ordered_json input;
    try {
        input = ordered_json::parse(input_json);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("manifest input is not valid JSON: ") + e.what());
    }
    prepare_dir(out_dir);

    RocReport roc;
    roc.curves = result.curves;
    roc.hull = result.hull;
    roc.anchor = result.config.left_anchor;
    for (const auto& a : result.aucs) roc.aucs.push_back(a.auc);
    {
        auto out = open_out(out_dir / "roc_points.csv");
        write_roc_points_csv(roc, out);
    }
    {
        auto out = open_out(out_dir / "hull.csv");
        write_hull_csv(roc, out);
    }
    {
        auto out = open_out(out_dir / "cells.csv");
        out << "family,tag,fold,tp,fp,tn,fn,train_minority,train_majority,synthetic\n";
        for (const auto& c : result.cells) {
            for (std::size_t f = 0; f < c.folds.size(); ++f) {
                const auto& cm = c.folds[f];
                out << csv_field(c.curve) << ',' << csv_field(c.tag) << ',' << f << ',' << cm.tp << ',' << cm.fp
                    << ',' << cm.tn << ',' << cm.fn << ',' << c.train_minority[f] << ',' << c.train_majority[f]
                    << ',' << c.synthetic[f] << '\n';
            }
        }
    }
    write_file(out_dir / "summary.json", experiment_summary_json(result));

    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    ordered_json manifest;
    manifest["tool"] = "smotekit";
    manifest["version"] = SMOTEKIT_VERSION;
    manifest["created_utc"] = stamp;
    manifest["input"] = input;
    manifest["config"] = ordered_json::parse(result.config.to_json_text());
    manifest["outputs"] = {"roc_points.csv", "hull.csv", "cells.csv", "summary.json"};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

void write_augmented(const AugmentedDataset& aug, Variant variant, const std::filesystem::path& csv_path,
                     const std::filesystem::path& provenance_path) {
    save_csv(aug.data, csv_path);
    auto out = open_out(provenance_path);
    for (std::size_t row = 0; row < aug.origin.size(); ++row) {
        if (!aug.origin[row].synthetic) continue;
        const auto& p = aug.batch.provenance.at(aug.origin[row].index);
        ordered_json j;
        j["row"] = row;
        j["base_index"] = p.base_index;
        j["neighbor_index"] = p.neighbor_index ? ordered_json(*p.neighbor_index) : ordered_json(nullptr);
        j["gap"] = p.gaps;
        j["variant"] = std::string(to_string(variant));
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + provenance_path.string());
}

}  // namespace smotekit
