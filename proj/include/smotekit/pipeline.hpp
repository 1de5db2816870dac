#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smotekit/data.hpp"
#include "smotekit/evaluate.hpp"
#include "smotekit/model.hpp"
#include "smotekit/resample.hpp"

namespace smotekit {

/// Families of classifiers that each trace one or more ROC curves.
///   smote_under     - one curve per over-sampling level, points sweep under-sampling
///   plain_under     - under-sampling only
///   replicate       - like smote_under but over-samples by replication
///   priors_sweep    - Naive Bayes with the minority prior scaled
///   threshold_sweep - classifier trained on raw data, decision threshold swept
enum class Family : std::uint8_t { smote_under, plain_under, replicate, priors_sweep, threshold_sweep };

std::string_view to_string(Family f);
Family parse_family(std::string_view s);

struct ExperimentConfig {
    std::vector<Family> families{Family::smote_under, Family::plain_under};
    std::vector<unsigned> over_percents{50, 100, 200, 300, 400, 500};
    std::vector<unsigned> under_percents{10,  15,  25,  50,  75,  100, 125, 150,  175,
                                         200, 300, 400, 500, 600, 700, 800, 1000, 2000};
    std::vector<double> prior_multipliers{1, 2, 3, 4, 5, 6, 8, 10, 15, 20, 25, 30, 40, 50};
    std::vector<double> thresholds{0.5,  0.45, 0.42, 0.4,  0.35, 0.32, 0.3,  0.27, 0.25,
                                   0.22, 0.2,  0.17, 0.15, 0.12, 0.1,  0.05, 0.0};
    std::size_t k = 5;
    std::size_t n_folds = 10;
    std::uint64_t seed = 1;
    std::optional<Variant> variant;  // unset: chosen from the schema
    GapMode gap_mode = GapMode::per_attribute;
    NeighborMode neighbor_mode = NeighborMode::with_replacement;
    UnderBasis under_basis = UnderBasis::pre_smote;
    /// Adds the "no under-sampling" point at the start of every resampling curve.
    bool include_unsampled = true;
    LeftAnchor left_anchor = LeftAnchor::origin;
    ClassifierSpec classifier;
    /// Worker threads; 0 picks the hardware concurrency. Never affects results.
    unsigned threads = 0;

    void validate() const;
    std::string to_json_text() const;
    /// Missing keys keep their defaults; unknown keys are a ConfigError.
    static ExperimentConfig from_json_text(std::string_view text);
};

/// One grid cell after cross-validation.
struct CellRecord {
    std::string curve;
    Family family = Family::plain_under;
    std::string tag;
    unsigned over_percent = 0;
    unsigned under_percent = 0;  // 0: no under-sampling
    double prior_multiplier = 1.0;
    double threshold = 0.5;
    bool skipped = false;
    std::string skip_reason;
    RocPoint point;
    std::vector<ConfusionMatrix> folds;
    std::vector<std::size_t> train_minority;
    std::vector<std::size_t> train_majority;
    std::vector<std::size_t> synthetic;
};

struct CurveSummary {
    std::string curve;
    Family family = Family::plain_under;
    unsigned over_percent = 0;
    std::size_t points = 0;
    double auc = 0;
};

struct ExperimentResult {
    ExperimentConfig config;
    Variant variant = Variant::smote;
    std::vector<CellRecord> cells;
    std::vector<RocCurve> curves;
    std::vector<CurveSummary> aucs;
    std::vector<HullVertex> hull;
    std::vector<std::string> warnings;
    /// Synthetic rows whose provenance was checked against the test fold.
    std::size_t audited_synthetic_rows = 0;
};

/// Family kind encoded in a curve label ("smote_under@200" -> smote_under).
Family family_of_curve(std::string_view curve);

/// Runs stratified cross-validation over every grid cell of every requested
/// family. Resampling touches training folds only. Each (curve, cell, fold)
/// draws from its own RNG substream, so results do not depend on evaluation
/// order, thread count, or which other families are present.
ExperimentResult run_experiment(const Dataset& ds, const ExperimentConfig& cfg);

}  // namespace smotekit
