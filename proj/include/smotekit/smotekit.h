/*
 * smotekit C API.
 *
 * Opaque handles own their data; free each with its matching *_free call.
 * Every function returning smk_status leaves a message retrievable with
 * smk_last_error() on failure (thread-local, valid until the next failing
 * call on the same thread). Strings returned through char** are allocated by
 * the library and released with smk_string_free().
 */
#ifndef SMOTEKIT_SMOTEKIT_H
#define SMOTEKIT_SMOTEKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(SMK_BUILDING_LIBRARY)
#define SMK_API __attribute__((visibility("default")))
#else
#define SMK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smk_status {
    SMK_OK = 0,
    SMK_ERR_INVALID_ARGUMENT = 1, /* null handle or out-of-range enum */
    SMK_ERR_CONFIG = 2,           /* bad parameters or configuration */
    SMK_ERR_DATA = 3,             /* input data violates a contract */
    SMK_ERR_IO = 4,               /* unreadable input or unwritable output */
    SMK_ERR_INTERNAL = 5
} smk_status;

typedef enum smk_variant {
    SMK_VARIANT_SMOTE = 0,
    SMK_VARIANT_SMOTE_NC = 1,
    SMK_VARIANT_SMOTE_N = 2,
    SMK_VARIANT_REPLICATE = 3,
    SMK_VARIANT_AUTO = 4 /* picked from the schema */
} smk_variant;

typedef enum smk_gap_mode { SMK_GAP_PER_ATTRIBUTE = 0, SMK_GAP_SHARED = 1 } smk_gap_mode;

typedef enum smk_neighbor_mode { SMK_NEIGHBORS_WITH_REPLACEMENT = 0, SMK_NEIGHBORS_DISTINCT = 1 } smk_neighbor_mode;

typedef enum smk_under_basis { SMK_UNDER_BASIS_PRE = 0, SMK_UNDER_BASIS_POST = 1 } smk_under_basis;

typedef enum smk_left_anchor { SMK_LEFT_ANCHOR_ORIGIN = 0, SMK_LEFT_ANCHOR_NONE = 1 } smk_left_anchor;

typedef struct smk_dataset smk_dataset;
typedef struct smk_augmented smk_augmented;
typedef struct smk_experiment smk_experiment;
typedef struct smk_roc_set smk_roc_set;

SMK_API const char* smk_version(void);
SMK_API const char* smk_last_error(void);
SMK_API void smk_string_free(char* s);

typedef void (*smk_warning_callback)(const char* message, void* user_data);
/* NULL restores the default (stderr). */
SMK_API void smk_set_warning_callback(smk_warning_callback cb, void* user_data);

/* ---- datasets ---------------------------------------------------------- */

SMK_API smk_status smk_dataset_load(const char* csv_path, const char* schema_path, const char* minority_label,
                                    smk_dataset** out);
SMK_API smk_status smk_dataset_load_text(const char* csv_text, const char* schema_json, const char* minority_label,
                                         smk_dataset** out);
SMK_API void smk_dataset_free(smk_dataset* ds);
SMK_API size_t smk_dataset_rows(const smk_dataset* ds);
SMK_API size_t smk_dataset_features(const smk_dataset* ds);
SMK_API size_t smk_dataset_minority_count(const smk_dataset* ds);
SMK_API size_t smk_dataset_majority_count(const smk_dataset* ds);
SMK_API smk_status smk_dataset_save(const smk_dataset* ds, const char* csv_path);

/* ---- resampling -------------------------------------------------------- */

typedef struct smk_resample_options {
    int variant;            /* smk_variant */
    uint32_t over_percent;  /* 0 disables over-sampling */
    uint32_t under_percent; /* 0 disables under-sampling */
    uint32_t k;
    uint64_t seed;
    int gap_mode;      /* smk_gap_mode */
    int neighbor_mode; /* smk_neighbor_mode */
    int under_basis;   /* smk_under_basis */
    int shuffle;       /* nonzero shuffles the output rows */
} smk_resample_options;

/* variant AUTO, 100% over, no under-sampling, k = 5, seed 1. */
SMK_API void smk_resample_options_init(smk_resample_options* opts);
SMK_API smk_status smk_resample(const smk_dataset* ds, const smk_resample_options* opts, smk_augmented** out);
SMK_API void smk_augmented_free(smk_augmented* aug);
SMK_API size_t smk_augmented_rows(const smk_augmented* aug);
SMK_API size_t smk_augmented_synthetic_count(const smk_augmented* aug);
SMK_API size_t smk_augmented_minority_count(const smk_augmented* aug);
SMK_API size_t smk_augmented_majority_count(const smk_augmented* aug);
/* Writes the rows as CSV and, when provenance_path is non-NULL, one JSON
 * line per synthetic row. */
SMK_API smk_status smk_augmented_save(const smk_augmented* aug, const char* csv_path, const char* provenance_path);

/* ---- experiments ------------------------------------------------------- */

SMK_API smk_status smk_experiment_default_config(char** config_json);
SMK_API smk_status smk_experiment_run(const smk_dataset* ds, const char* config_json, smk_experiment** out);
SMK_API void smk_experiment_free(smk_experiment* exp);
SMK_API size_t smk_experiment_curve_count(const smk_experiment* exp);
/* *family stays owned by the handle. */
SMK_API smk_status smk_experiment_curve_auc(const smk_experiment* exp, size_t index, const char** family,
                                            double* auc);
SMK_API smk_status smk_experiment_summary(const smk_experiment* exp, char** summary_json);
/* input_json may be NULL; otherwise a JSON object recorded in the manifest. */
SMK_API smk_status smk_experiment_write_report(const smk_experiment* exp, const char* out_dir,
                                               const char* input_json);

/* ---- ROC evaluation ---------------------------------------------------- */

SMK_API smk_status smk_roc_set_create(smk_roc_set** out);
/* CSV with family, fp_rate, tp_rate and optional tag columns. */
SMK_API smk_status smk_roc_set_load(const char* csv_path, smk_roc_set** out);
SMK_API void smk_roc_set_free(smk_roc_set* set);
SMK_API smk_status smk_roc_set_add_point(smk_roc_set* set, const char* family, const char* tag, double fp_rate,
                                         double tp_rate);
SMK_API smk_status smk_roc_set_auc(const smk_roc_set* set, const char* family, int left_anchor, double* auc);
SMK_API smk_status smk_roc_set_hull_size(const smk_roc_set* set, size_t* vertices);
SMK_API smk_status smk_roc_set_summary(const smk_roc_set* set, int left_anchor, char** summary_json);
SMK_API smk_status smk_roc_set_write_report(const smk_roc_set* set, const char* out_dir, int left_anchor);

#ifdef __cplusplus
}
#endif

#endif /* SMOTEKIT_SMOTEKIT_H */
