// smotekit command-line front end. Everything goes through the C API.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smotekit/smotekit.h"

namespace {

using nlohmann::json;

// Exit codes: 0 ok, 2 configuration error, 3 data error, 1 anything else.
int exit_code(smk_status s) {
    switch (s) {
        case SMK_OK: return 0;
        case SMK_ERR_INVALID_ARGUMENT:
        case SMK_ERR_CONFIG: return 2;
        case SMK_ERR_DATA:
        case SMK_ERR_IO: return 3;
        default: return 1;
    }
}

struct Failure {
    int code;
};

void check(smk_status s) {
    if (s != SMK_OK) {
        std::cerr << "error: " << smk_last_error() << '\n';
        throw Failure{exit_code(s)};
    }
}

void config_error(const std::string& msg) {
    std::cerr << "error: " << msg << '\n';
    throw Failure{2};
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
};

using DatasetHandle = Handle<smk_dataset, smk_dataset_free>;
using AugmentedHandle = Handle<smk_augmented, smk_augmented_free>;
using ExperimentHandle = Handle<smk_experiment, smk_experiment_free>;
using RocHandle = Handle<smk_roc_set, smk_roc_set_free>;

std::string take_string(char* s) {
    std::string out = s ? s : "";
    smk_string_free(s);
    return out;
}

struct CommonOptions {
    std::string data;
    std::string schema;
    std::string minority;
    std::uint64_t seed = 1;
    unsigned k = 5;
    std::vector<unsigned> over;
    std::vector<unsigned> under;
    std::string variant = "auto";
    std::string out;
    std::string gap_mode = "per-attribute";
    std::string neighbor_mode = "with-replacement";
    std::string under_basis = "pre";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_data = true) {
    auto* data = cmd->add_option("data", o.data, "input CSV");
    auto* schema = cmd->add_option("--schema", o.schema, "schema sidecar JSON");
    auto* minority = cmd->add_option("--minority", o.minority, "class token of the minority class");
    if (needs_data) {
        data->required();
        schema->required();
        minority->required();
    }
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--k", o.k, "number of nearest neighbors")->check(CLI::PositiveNumber);
    cmd->add_option("--over", o.over, "over-sampling percent(s)")->delimiter(',');
    cmd->add_option("--under", o.under, "under-sampling percent(s)")->delimiter(',');
    cmd->add_option("--variant", o.variant, "auto|smote|smote-nc|smote-n|replicate");
    cmd->add_option("--out", o.out, "output directory")->required();
    cmd->add_option("--gap-mode", o.gap_mode, "per-attribute|shared")
        ->check(CLI::IsMember({"per-attribute", "shared"}));
    cmd->add_option("--neighbor-mode", o.neighbor_mode, "with-replacement|distinct")
        ->check(CLI::IsMember({"with-replacement", "distinct"}));
    cmd->add_option("--under-basis", o.under_basis, "pre|post")->check(CLI::IsMember({"pre", "post"}));
}

unsigned single_percent(const std::vector<unsigned>& v, unsigned fallback, const char* flag) {
    if (v.empty()) return fallback;
    if (v.size() != 1) config_error(std::string(flag) + " takes a single value for this command");
    return v.front();
}

void load(const CommonOptions& o, DatasetHandle& ds) {
    check(smk_dataset_load(o.data.c_str(), o.schema.c_str(), o.minority.c_str(), &ds.p));
}

int run_resample(const CommonOptions& o, int variant, unsigned default_over) {
    DatasetHandle ds;
    load(o, ds);
    smk_resample_options opts;
    smk_resample_options_init(&opts);
    opts.variant = variant;
    opts.over_percent = single_percent(o.over, default_over, "--over");
    opts.under_percent = single_percent(o.under, 0, "--under");
    opts.k = o.k;
    opts.seed = o.seed;
    opts.gap_mode = o.gap_mode == "shared" ? SMK_GAP_SHARED : SMK_GAP_PER_ATTRIBUTE;
    opts.neighbor_mode = o.neighbor_mode == "distinct" ? SMK_NEIGHBORS_DISTINCT : SMK_NEIGHBORS_WITH_REPLACEMENT;
    opts.under_basis = o.under_basis == "post" ? SMK_UNDER_BASIS_POST : SMK_UNDER_BASIS_PRE;
    AugmentedHandle aug;
    check(smk_resample(ds.p, &opts, &aug.p));
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    const auto dir = std::filesystem::path(o.out);
    check(smk_augmented_save(aug.p, (dir / "augmented.csv").c_str(), (dir / "provenance.jsonl").c_str()));
    std::cout << "rows " << smk_augmented_rows(aug.p) << " (minority " << smk_augmented_minority_count(aug.p)
              << ", majority " << smk_augmented_majority_count(aug.p) << ", synthetic "
              << smk_augmented_synthetic_count(aug.p) << ")\n"
              << "wrote " << (dir / "augmented.csv").string() << " and " << (dir / "provenance.jsonl").string()
              << '\n';
    return 0;
}

void print_summary(const std::string& summary_text) {
    const auto s = json::parse(summary_text);
    std::cout << "left anchor: " << s["left_anchor"].get<std::string>() << '\n';
    for (const auto& c : s["curves"]) {
        std::cout << "  " << c["family"].get<std::string>() << "  AUC " << c["auc"].get<double>() << "  ("
                  << c["auc_x10000"].get<long>() << ")\n";
    }
    std::cout << "hull vertices: " << s["hull"].size() << '\n';
    if (s.contains("hull_vertices_by_kind")) {
        for (const auto& [k, v] : s["hull_vertices_by_kind"].items()) {
            std::cout << "  " << k << ": " << v.get<std::size_t>() << '\n';
        }
        std::cout << "most hull vertices: " << s["most_hull_vertices"].get<std::string>() << '\n';
        for (const auto& k : s["kinds_without_hull_vertices"]) {
            std::cout << "  no hull vertex from " << k.get<std::string>() << '\n';
        }
    }
    if (s.contains("smote_vs_under")) {
        const auto& c = s["smote_vs_under"];
        std::cout << "smote_under vs plain_under AUC difference: " << c["auc_difference"].get<double>() << '\n';
        if (!c["smote_not_worse_within_0_02"].get<bool>()) {
            std::cout << "WARNING: best smote_under AUC is more than 0.02 below plain_under\n";
        }
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open " << path << '\n';
        throw Failure{3};
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"smotekit: SMOTE-family resampling and ROC evaluation for imbalanced data"};
    app.set_version_flag("--version", std::string(smk_version()));
    app.require_subcommand(1);

    CommonOptions smote_o, smote_nc_o, smote_n_o, rep_o, under_o, exp_o;
    auto* smote_cmd = app.add_subcommand("smote", "SMOTE over continuous features");
    add_common(smote_cmd, smote_o);
    auto* smote_nc_cmd = app.add_subcommand("smote-nc", "SMOTE over mixed continuous/nominal features");
    add_common(smote_nc_cmd, smote_nc_o);
    auto* smote_n_cmd = app.add_subcommand("smote-n", "SMOTE over nominal features (value difference metric)");
    add_common(smote_n_cmd, smote_n_o);
    auto* rep_cmd = app.add_subcommand("replicate", "over-sample the minority by replication");
    add_common(rep_cmd, rep_o);
    auto* under_cmd = app.add_subcommand("undersample", "randomly under-sample the majority class");
    add_common(under_cmd, under_o);

    std::string points_path, eval_out, left_anchor = "origin";
    auto* eval_cmd = app.add_subcommand("evaluate", "AUC and ROC convex hull for a CSV of ROC points");
    eval_cmd->add_option("points", points_path, "CSV with family,fp_rate,tp_rate[,tag]")->required();
    eval_cmd->add_option("--out", eval_out, "output directory")->required();
    eval_cmd->add_option("--left-anchor", left_anchor, "origin|none")->check(CLI::IsMember({"origin", "none"}));

    auto* exp_cmd = app.add_subcommand("experiment", "cross-validated ROC experiment over resampling families");
    add_common(exp_cmd, exp_o, false);
    std::size_t folds = 10;
    unsigned threads = 0;
    std::vector<std::string> families;
    std::vector<double> priors, thresholds;
    std::string classifier = "naive_bayes", external_cmd, manifest_path, exp_anchor = "origin";
    std::optional<double> threshold;
    bool no_unsampled = false;
    exp_cmd->add_option("--folds", folds, "cross-validation folds")->check(CLI::Range(2, 1000));
    exp_cmd->add_option("--families", families,
                        "smote_under,plain_under,replicate,priors_sweep,threshold_sweep")
        ->delimiter(',');
    exp_cmd->add_option("--classifier", classifier, "naive_bayes|external");
    exp_cmd->add_option("--external-cmd", external_cmd, "command for the external classifier");
    exp_cmd->add_option("--threshold", threshold, "decision threshold");
    exp_cmd->add_option("--priors", priors, "minority prior multipliers")->delimiter(',');
    exp_cmd->add_option("--thresholds", thresholds, "thresholds for threshold_sweep")->delimiter(',');
    exp_cmd->add_option("--left-anchor", exp_anchor, "origin|none")->check(CLI::IsMember({"origin", "none"}));
    exp_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    exp_cmd->add_flag("--no-unsampled", no_unsampled, "omit the no-under-sampling point from each curve");
    exp_cmd->add_option("--from-manifest", manifest_path, "repeat the run recorded in a manifest.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*smote_cmd) return run_resample(smote_o, SMK_VARIANT_SMOTE, 100);
        if (*smote_nc_cmd) return run_resample(smote_nc_o, SMK_VARIANT_SMOTE_NC, 100);
        if (*smote_n_cmd) return run_resample(smote_n_o, SMK_VARIANT_SMOTE_N, 100);
        if (*rep_cmd) return run_resample(rep_o, SMK_VARIANT_REPLICATE, 100);
        if (*under_cmd) {
            if (under_o.under.empty()) config_error("undersample needs --under");
            under_o.over.clear();
            return run_resample(under_o, SMK_VARIANT_AUTO, 0);
        }
        if (*eval_cmd) {
            RocHandle set;
            check(smk_roc_set_load(points_path.c_str(), &set.p));
            const int anchor = left_anchor == "none" ? SMK_LEFT_ANCHOR_NONE : SMK_LEFT_ANCHOR_ORIGIN;
            check(smk_roc_set_write_report(set.p, eval_out.c_str(), anchor));
            char* summary = nullptr;
            check(smk_roc_set_summary(set.p, anchor, &summary));
            print_summary(take_string(summary));
            return 0;
        }
        if (*exp_cmd) {
            json cfg;
            json input;
            if (!manifest_path.empty()) {
                json manifest;
                try {
                    manifest = json::parse(read_file(manifest_path));
                    cfg = manifest.at("config");
                    input = manifest.at("input");
                    exp_o.data = input.at("data").get<std::string>();
                    exp_o.schema = input.at("schema").get<std::string>();
                    exp_o.minority = input.at("minority").get<std::string>();
                } catch (const json::exception& e) {
                    config_error(std::string("manifest is incomplete: ") + e.what());
                }
            } else {
                if (exp_o.data.empty() || exp_o.schema.empty() || exp_o.minority.empty()) {
                    config_error("experiment needs a data CSV, --schema and --minority (or --from-manifest)");
                }
                char* defaults = nullptr;
                check(smk_experiment_default_config(&defaults));
                cfg = json::parse(take_string(defaults));
                if (!families.empty()) cfg["families"] = families;
                if (!exp_o.over.empty()) cfg["over_percents"] = exp_o.over;
                if (!exp_o.under.empty()) cfg["under_percents"] = exp_o.under;
                if (!priors.empty()) cfg["prior_multipliers"] = priors;
                if (!thresholds.empty()) cfg["thresholds"] = thresholds;
                cfg["k"] = exp_o.k;
                cfg["n_folds"] = folds;
                cfg["seed"] = exp_o.seed;
                cfg["variant"] = exp_o.variant;
                cfg["gap_mode"] = exp_o.gap_mode;
                cfg["neighbor_mode"] = exp_o.neighbor_mode;
                cfg["under_basis"] = exp_o.under_basis;
                cfg["left_anchor"] = exp_anchor;
                cfg["include_unsampled"] = !no_unsampled;
                cfg["classifier"]["kind"] = classifier;
                cfg["classifier"]["external_command"] = external_cmd;
                if (threshold) cfg["classifier"]["threshold"] = *threshold;
                std::error_code ec;
                input = {{"data", std::filesystem::absolute(exp_o.data, ec).string()},
                         {"schema", std::filesystem::absolute(exp_o.schema, ec).string()},
                         {"minority", exp_o.minority}};
            }
            cfg["threads"] = threads;
            DatasetHandle ds;
            load(exp_o, ds);
            ExperimentHandle exp;
            check(smk_experiment_run(ds.p, cfg.dump().c_str(), &exp.p));
            check(smk_experiment_write_report(exp.p, exp_o.out.c_str(), input.dump().c_str()));
            char* summary = nullptr;
            check(smk_experiment_summary(exp.p, &summary));
            print_summary(take_string(summary));
            std::cout << "wrote report to " << exp_o.out << '\n';
            return 0;
        }
    } catch (const Failure& f) {
        return f.code;
    }
    return 2;
}
