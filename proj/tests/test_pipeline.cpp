#include <gtest/gtest.h>

#include <map>

#include "smotekit/diagnostics.hpp"
#include "smotekit/error.hpp"
#include "smotekit/pipeline.hpp"
#include "test_support.hpp"

using namespace smotekit;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.over_percents = {100, 200};
    c.under_percents = {50, 100, 200};
    c.n_folds = 5;
    c.seed = 3;
    return c;
}

const Dataset& blobs() {
    static const Dataset ds = support::gaussian_blobs(240, 40, 3, 1.2, 77);
    return ds;
}

std::map<std::string, RocPoint> points_by(const ExperimentResult& r) {
    std::map<std::string, RocPoint> out;
    for (const auto& c : r.cells) out[c.curve + "/" + c.tag] = c.point;
    return out;
}

void expect_same(const ExperimentResult& a, const ExperimentResult& b) {
    ASSERT_EQ(a.cells.size(), b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        EXPECT_EQ(a.cells[i].curve, b.cells[i].curve);
        EXPECT_EQ(a.cells[i].tag, b.cells[i].tag);
        EXPECT_EQ(a.cells[i].folds, b.cells[i].folds);
        EXPECT_EQ(a.cells[i].point, b.cells[i].point);
    }
    ASSERT_EQ(a.aucs.size(), b.aucs.size());
    for (std::size_t i = 0; i < a.aucs.size(); ++i) EXPECT_EQ(a.aucs[i].auc, b.aucs[i].auc);
}

struct QuietWarnings {
    std::vector<std::string> seen;
    QuietWarnings() {
        set_warning_sink([this](std::string_view w) { seen.emplace_back(w); });
    }
    ~QuietWarnings() { set_warning_sink(nullptr); }
};

}  // namespace

TEST(Pipeline, DegeneratePlainGrid) {
    ExperimentConfig c;
    c.families = {Family::plain_under};
    c.under_percents = {100};
    c.include_unsampled = false;
    c.n_folds = 4;
    auto r = run_experiment(blobs(), c);
    ASSERT_EQ(r.curves.size(), 1u);
    EXPECT_EQ(r.curves[0].family, "plain_under");
    EXPECT_EQ(r.curves[0].points.size(), 1u);
    EXPECT_EQ(r.curves[0].points[0].tag, "under=100");
    EXPECT_GE(r.hull.size(), 2u);
    EXPECT_EQ(r.hull.front().family, "anchor");
    EXPECT_EQ(r.hull.back().family, "anchor");
    // Four folds over 40 minority leave 30 per training fold, and as many majority.
    for (auto m : r.cells[0].train_majority) EXPECT_EQ(m, 30u);
}

TEST(Pipeline, CurveLabelsAndAucs) {
    auto r = run_experiment(blobs(), small_config());
    std::vector<std::string> labels;
    for (const auto& s : r.aucs) labels.push_back(s.curve);
    EXPECT_EQ(labels, (std::vector<std::string>{"smote_under@100", "smote_under@200", "plain_under"}));
    for (const auto& s : r.aucs) {
        EXPECT_GT(s.auc, 0.5);
        EXPECT_LE(s.auc, 1.0);
    }
    EXPECT_EQ(r.aucs[1].over_percent, 200u);
    EXPECT_EQ(family_of_curve("smote_under@200"), Family::smote_under);
    EXPECT_GT(r.audited_synthetic_rows, 0u);
}

TEST(Pipeline, DeterministicAcrossRunsAndThreads) {
    auto c = small_config();
    c.threads = 1;
    auto a = run_experiment(blobs(), c);
    c.threads = 4;
    auto b = run_experiment(blobs(), c);
    expect_same(a, b);
    expect_same(b, run_experiment(blobs(), c));
}

TEST(Pipeline, FamiliesDoNotPerturbEachOther) {
    auto c = small_config();
    auto full = points_by(run_experiment(blobs(), c));
    c.families = {Family::smote_under};
    c.over_percents = {200};
    auto alone = points_by(run_experiment(blobs(), c));
    for (const auto& [key, p] : alone) EXPECT_EQ(full.at(key), p) << key;
}

TEST(Pipeline, GridOrderIsIrrelevant) {
    auto c = small_config();
    auto a = points_by(run_experiment(blobs(), c));
    c.under_percents = {200, 50, 100};
    c.over_percents = {200, 100};
    c.families = {Family::plain_under, Family::smote_under};
    EXPECT_EQ(points_by(run_experiment(blobs(), c)), a);
}

TEST(Pipeline, PlainAndSmoteShareMajorityCounts) {
    auto r = run_experiment(blobs(), small_config());
    std::map<std::string, std::vector<std::size_t>> plain;
    for (const auto& c : r.cells)
        if (c.family == Family::plain_under) plain[c.tag] = c.train_majority;
    for (const auto& c : r.cells) {
        if (c.family != Family::smote_under) continue;
        EXPECT_EQ(c.train_majority, plain.at(c.tag)) << c.curve << " " << c.tag;
    }
}

TEST(Pipeline, SyntheticCountsPerFold) {
    auto r = run_experiment(blobs(), small_config());
    for (const auto& c : r.cells) {
        for (std::size_t f = 0; f < c.synthetic.size(); ++f) {
            const std::size_t real = c.train_minority[f] - c.synthetic[f];
            EXPECT_EQ(c.synthetic[f], real * c.over_percent / 100);
            EXPECT_EQ(real, 32u);
        }
    }
}

TEST(Pipeline, SkipsCellsThatEmptyTheMajority) {
    QuietWarnings quiet;
    auto ds = support::gaussian_blobs(60, 10, 2, 1.0, 5);
    ExperimentConfig c;
    c.families = {Family::plain_under};
    c.under_percents = {100, 2000};
    c.n_folds = 5;
    auto r = run_experiment(ds, c);
    bool skipped = false;
    for (const auto& cell : r.cells)
        if (cell.tag == "under=2000") skipped = cell.skipped;
    EXPECT_TRUE(skipped);
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings[0].find("under=2000"), std::string::npos);
    EXPECT_EQ(quiet.seen.size(), r.warnings.size());
    EXPECT_EQ(r.curves[0].points.size(), 2u);
}

TEST(Pipeline, PriorAndThresholdSweeps) {
    auto c = small_config();
    c.families = {Family::priors_sweep, Family::threshold_sweep};
    auto r = run_experiment(blobs(), c);
    ASSERT_EQ(r.curves.size(), 2u);
    std::vector<const CellRecord*> sweep;
    for (const auto& cell : r.cells)
        if (cell.family == Family::threshold_sweep) sweep.push_back(&cell);
    ASSERT_EQ(sweep.size(), c.thresholds.size());
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        EXPECT_LT(sweep[i]->threshold, sweep[i - 1]->threshold);
        // Thresholds fall along the list; counts per fold never decrease.
        for (std::size_t f = 0; f < c.n_folds; ++f) {
            EXPECT_GE(sweep[i]->folds[f].tp, sweep[i - 1]->folds[f].tp);
            EXPECT_GE(sweep[i]->folds[f].fp, sweep[i - 1]->folds[f].fp);
        }
    }
    EXPECT_EQ(sweep.back()->point.tp_rate, 100.0);
    EXPECT_EQ(sweep.back()->point.fp_rate, 100.0);
}

TEST(Pipeline, ReplicateFamily) {
    auto c = small_config();
    c.families = {Family::replicate};
    auto r = run_experiment(blobs(), c);
    ASSERT_EQ(r.curves.size(), 2u);
    EXPECT_EQ(r.curves[0].family, "replicate@100");
}

TEST(Pipeline, NominalDataPicksSmoteN) {
    auto s = support::nominal_schema(3);
    Rng rng(4);
    std::vector<FeatureVector> rows;
    std::vector<ClassLabel> labels;
    for (int i = 0; i < 120; ++i) {
        const bool minority = i < 30;
        rows.push_back({double(rng.below(minority ? 2 : 4)), double(rng.below(3)), double(rng.below(2))});
        labels.push_back(minority ? ClassLabel::minority : ClassLabel::majority);
    }
    auto ds = support::make_dataset(s, rows, labels, 4);
    auto c = small_config();
    auto r = run_experiment(ds, c);
    EXPECT_EQ(r.variant, Variant::smote_n);
    c.variant = Variant::smote;
    EXPECT_THROW(run_experiment(ds, c), ConfigError);
}

TEST(Pipeline, MixedDataPicksSmoteNc) {
    FeatureSchema s({{"x", FeatureKind::continuous}, {"c", FeatureKind::nominal}}, "class");
    Rng rng(5);
    std::vector<FeatureVector> rows;
    std::vector<ClassLabel> labels;
    for (int i = 0; i < 100; ++i) {
        const bool minority = i < 25;
        rows.push_back({support::normal(rng) + (minority ? 1.5 : 0), double(rng.below(3))});
        labels.push_back(minority ? ClassLabel::minority : ClassLabel::majority);
    }
    auto r = run_experiment(support::make_dataset(s, rows, labels, 3), small_config());
    EXPECT_EQ(r.variant, Variant::smote_nc);
}

TEST(Config, Validation) {
    ExperimentConfig c;
    c.families.clear();
    EXPECT_THROW(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.under_percents = {0};
    EXPECT_THROW(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.families = {Family::smote_under, Family::smote_under};
    EXPECT_THROW(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.variant = Variant::replicate;
    EXPECT_THROW(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.families = {Family::threshold_sweep};
    c.thresholds = {1.5};
    EXPECT_THROW(c.validate(), ConfigError);
    c = ExperimentConfig{};
    c.n_folds = 1;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_NO_THROW(ExperimentConfig{}.validate());
}

TEST(Config, JsonRoundTrip) {
    auto c = small_config();
    c.families = {Family::plain_under, Family::priors_sweep};
    c.variant = Variant::smote_nc;
    c.gap_mode = GapMode::shared;
    c.left_anchor = LeftAnchor::none;
    c.classifier.threshold = 0.3;
    auto back = ExperimentConfig::from_json_text(c.to_json_text());
    EXPECT_EQ(back.to_json_text(), c.to_json_text());
    EXPECT_EQ(back.families, c.families);
    EXPECT_EQ(back.variant, c.variant);
}

TEST(Config, JsonErrors) {
    EXPECT_THROW(ExperimentConfig::from_json_text(R"({"bogus": 1})"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json_text(R"({"k": "five"})"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json_text(R"({"families": ["c45"]})"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json_text("[]"), ConfigError);
    EXPECT_THROW(ExperimentConfig::from_json_text("{"), ConfigError);
    EXPECT_EQ(ExperimentConfig::from_json_text("{}").n_folds, 10u);
}
