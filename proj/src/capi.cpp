#include "smotekit/smotekit.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "smotekit/data.hpp"
#include "smotekit/diagnostics.hpp"
#include "smotekit/error.hpp"
#include "smotekit/pipeline.hpp"
#include "smotekit/report.hpp"
#include "smotekit/resample.hpp"

using namespace smotekit;

struct smk_dataset {
    Dataset ds;
};

struct smk_augmented {
    AugmentedDataset aug;
    Variant variant;
};

struct smk_experiment {
    ExperimentResult result;
};

struct smk_roc_set {
    std::vector<RocCurve> curves;
};

namespace {

thread_local std::string last_error;

smk_status fail(smk_status s, std::string msg) {
    last_error = std::move(msg);
    return s;
}

template <class F>
smk_status guarded(F&& body) {
    try {
        body();
        return SMK_OK;
    } catch (const ConfigError& e) {
        return fail(SMK_ERR_CONFIG, e.what());
    } catch (const DataError& e) {
        return fail(SMK_ERR_DATA, e.what());
    } catch (const IoError& e) {
        return fail(SMK_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SMK_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SMK_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SMK_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class... P>
bool any_null(P... p) {
    return ((p == nullptr) || ...);
}

LeftAnchor anchor_from(int a) {
    if (a == SMK_LEFT_ANCHOR_ORIGIN) return LeftAnchor::origin;
    if (a == SMK_LEFT_ANCHOR_NONE) return LeftAnchor::none;
    throw ConfigError("unknown left anchor value");
}

smk_warning_callback warning_cb = nullptr;
void* warning_user = nullptr;

}  // namespace

extern "C" {

const char* smk_version(void) { return SMOTEKIT_VERSION; }

const char* smk_last_error(void) { return last_error.c_str(); }

void smk_string_free(char* s) { std::free(s); }

void smk_set_warning_callback(smk_warning_callback cb, void* user_data) {
    if (!cb) {
        set_warning_sink({});
        return;
    }
    warning_cb = cb;
    warning_user = user_data;
    set_warning_sink([](std::string_view msg) { warning_cb(std::string(msg).c_str(), warning_user); });
}

smk_status smk_dataset_load(const char* csv_path, const char* schema_path, const char* minority_label,
                            smk_dataset** out) {
    if (any_null(csv_path, schema_path, minority_label, out)) {
        return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto schema = FeatureSchema::load_json(schema_path);
        *out = new smk_dataset{load_csv(csv_path, schema, minority_label)};
    });
}

smk_status smk_dataset_load_text(const char* csv_text, const char* schema_json, const char* minority_label,
                                 smk_dataset** out) {
    if (any_null(csv_text, schema_json, minority_label, out)) {
        return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto schema = FeatureSchema::from_json_text(schema_json);
        std::istringstream in(csv_text);
        *out = new smk_dataset{read_csv(in, schema, minority_label)};
    });
}

void smk_dataset_free(smk_dataset* ds) { delete ds; }

size_t smk_dataset_rows(const smk_dataset* ds) { return ds ? ds->ds.size() : 0; }
size_t smk_dataset_features(const smk_dataset* ds) { return ds ? ds->ds.schema().size() : 0; }
size_t smk_dataset_minority_count(const smk_dataset* ds) { return ds ? ds->ds.minority_count() : 0; }
size_t smk_dataset_majority_count(const smk_dataset* ds) { return ds ? ds->ds.majority_count() : 0; }

smk_status smk_dataset_save(const smk_dataset* ds, const char* csv_path) {
    if (any_null(ds, csv_path)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { save_csv(ds->ds, csv_path); });
}

void smk_resample_options_init(smk_resample_options* opts) {
    if (!opts) return;
    *opts = smk_resample_options{};
    opts->variant = SMK_VARIANT_AUTO;
    opts->over_percent = 100;
    opts->under_percent = 0;
    opts->k = 5;
    opts->seed = 1;
    opts->gap_mode = SMK_GAP_PER_ATTRIBUTE;
    opts->neighbor_mode = SMK_NEIGHBORS_WITH_REPLACEMENT;
    opts->under_basis = SMK_UNDER_BASIS_PRE;
    opts->shuffle = 0;
}

smk_status smk_resample(const smk_dataset* ds, const smk_resample_options* opts, smk_augmented** out) {
    if (any_null(ds, opts, out)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    if (opts->variant < SMK_VARIANT_SMOTE || opts->variant > SMK_VARIANT_AUTO ||
        (opts->gap_mode != SMK_GAP_PER_ATTRIBUTE && opts->gap_mode != SMK_GAP_SHARED) ||
        (opts->neighbor_mode != SMK_NEIGHBORS_WITH_REPLACEMENT && opts->neighbor_mode != SMK_NEIGHBORS_DISTINCT) ||
        (opts->under_basis != SMK_UNDER_BASIS_PRE && opts->under_basis != SMK_UNDER_BASIS_POST)) {
        return fail(SMK_ERR_INVALID_ARGUMENT, "option enum out of range");
    }
    return guarded([&] {
        if (opts->k == 0) throw ConfigError("k must be at least 1");
        PlanOptions p;
        p.over_percent = opts->over_percent;
        p.under_percent = opts->under_percent;
        p.k = opts->k;
        p.seed = opts->seed;
        p.variant = opts->variant == SMK_VARIANT_AUTO ? variant_for(ds->ds.schema())
                                                      : static_cast<Variant>(opts->variant);
        p.gap_mode = opts->gap_mode == SMK_GAP_SHARED ? GapMode::shared : GapMode::per_attribute;
        p.neighbor_mode =
            opts->neighbor_mode == SMK_NEIGHBORS_DISTINCT ? NeighborMode::distinct : NeighborMode::with_replacement;
        p.under_basis = opts->under_basis == SMK_UNDER_BASIS_POST ? UnderBasis::post_smote : UnderBasis::pre_smote;
        p.shuffle = opts->shuffle != 0;
        *out = new smk_augmented{apply_plan(ds->ds, p), p.variant};
    });
}

void smk_augmented_free(smk_augmented* aug) { delete aug; }
size_t smk_augmented_rows(const smk_augmented* a) { return a ? a->aug.data.size() : 0; }
size_t smk_augmented_synthetic_count(const smk_augmented* a) { return a ? a->aug.batch.size() : 0; }
size_t smk_augmented_minority_count(const smk_augmented* a) { return a ? a->aug.data.minority_count() : 0; }
size_t smk_augmented_majority_count(const smk_augmented* a) { return a ? a->aug.data.majority_count() : 0; }

smk_status smk_augmented_save(const smk_augmented* aug, const char* csv_path, const char* provenance_path) {
    if (any_null(aug, csv_path)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        if (provenance_path) {
            write_augmented(aug->aug, aug->variant, csv_path, provenance_path);
        } else {
            save_csv(aug->aug.data, csv_path);
        }
    });
}

smk_status smk_experiment_default_config(char** config_json) {
    if (!config_json) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *config_json = dup_string(ExperimentConfig{}.to_json_text()); });
}

smk_status smk_experiment_run(const smk_dataset* ds, const char* config_json, smk_experiment** out) {
    if (any_null(ds, config_json, out)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto cfg = ExperimentConfig::from_json_text(config_json);
        *out = new smk_experiment{run_experiment(ds->ds, cfg)};
    });
}

void smk_experiment_free(smk_experiment* exp) { delete exp; }

size_t smk_experiment_curve_count(const smk_experiment* exp) { return exp ? exp->result.aucs.size() : 0; }

smk_status smk_experiment_curve_auc(const smk_experiment* exp, size_t index, const char** family, double* auc) {
    if (any_null(exp, family, auc)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    if (index >= exp->result.aucs.size()) return fail(SMK_ERR_INVALID_ARGUMENT, "curve index out of range");
    *family = exp->result.aucs[index].curve.c_str();
    *auc = exp->result.aucs[index].auc;
    return SMK_OK;
}

smk_status smk_experiment_summary(const smk_experiment* exp, char** summary_json) {
    if (any_null(exp, summary_json)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *summary_json = dup_string(experiment_summary_json(exp->result)); });
}

smk_status smk_experiment_write_report(const smk_experiment* exp, const char* out_dir, const char* input_json) {
    if (any_null(exp, out_dir)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { emit_report(exp->result, out_dir, input_json ? input_json : "{}"); });
}

smk_status smk_roc_set_create(smk_roc_set** out) {
    if (!out) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new smk_roc_set{}; });
}

smk_status smk_roc_set_load(const char* csv_path, smk_roc_set** out) {
    if (any_null(csv_path, out)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new smk_roc_set{load_roc_points(csv_path)}; });
}

void smk_roc_set_free(smk_roc_set* set) { delete set; }

smk_status smk_roc_set_add_point(smk_roc_set* set, const char* family, const char* tag, double fp_rate,
                                 double tp_rate) {
    if (any_null(set, family)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        if (!(fp_rate >= 0 && fp_rate <= 100 && tp_rate >= 0 && tp_rate <= 100)) {
            throw DataError("ROC rates must lie in [0,100]");
        }
        RocCurve* curve = nullptr;
        for (auto& c : set->curves) {
            if (c.family == family) curve = &c;
        }
        if (!curve) curve = &set->curves.emplace_back(RocCurve{family, {}});
        curve->points.push_back(RocPoint{fp_rate, tp_rate, tag ? tag : ""});
    });
}

smk_status smk_roc_set_auc(const smk_roc_set* set, const char* family, int left_anchor, double* out) {
    if (any_null(set, family, out)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        for (const auto& c : set->curves) {
            if (c.family == family) {
                *out = auc(c, anchor_from(left_anchor));
                return;
            }
        }
        throw DataError(std::string("no curve named '") + family + "'");
    });
}

smk_status smk_roc_set_hull_size(const smk_roc_set* set, size_t* vertices) {
    if (any_null(set, vertices)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *vertices = convex_hull(set->curves).size(); });
}

smk_status smk_roc_set_summary(const smk_roc_set* set, int left_anchor, char** summary_json) {
    if (any_null(set, summary_json)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        if (set->curves.empty()) throw DataError("ROC set is empty");
        *summary_json = dup_string(roc_summary_json(make_roc_report(set->curves, anchor_from(left_anchor))));
    });
}

smk_status smk_roc_set_write_report(const smk_roc_set* set, const char* out_dir, int left_anchor) {
    if (any_null(set, out_dir)) return fail(SMK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { emit_roc_report(make_roc_report(set->curves, anchor_from(left_anchor)), out_dir); });
}

}  // extern "C"
