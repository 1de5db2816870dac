#include "smotekit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <thread>

#include <json.hpp>

#include "smotekit/diagnostics.hpp"
#include "smotekit/error.hpp"

namespace smotekit {

using nlohmann::json;

std::string_view to_string(Family f) {
    switch (f) {
        case Family::smote_under: return "smote_under";
        case Family::plain_under: return "plain_under";
        case Family::replicate: return "replicate";
        case Family::priors_sweep: return "priors_sweep";
        case Family::threshold_sweep: return "threshold_sweep";
    }
    return "?";
}

Family parse_family(std::string_view s) {
    for (auto f : {Family::smote_under, Family::plain_under, Family::replicate, Family::priors_sweep,
                   Family::threshold_sweep}) {
        if (s == to_string(f)) return f;
    }
    throw ConfigError("unknown family: " + std::string(s));
}

Family family_of_curve(std::string_view curve) { return parse_family(curve.substr(0, curve.find('@'))); }

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
    if (families.empty()) {
        throw ConfigError("no families selected");
    }
    if (std::set<Family>(families.begin(), families.end()).size() != families.size()) {
        throw ConfigError("family listed twice");
    }
    auto has = [&](Family f) { return std::find(families.begin(), families.end(), f) != families.end(); };
    auto check_percents = [](const std::vector<unsigned>& v, const char* what) {
        if (v.empty()) throw ConfigError(std::string(what) + " list is empty");
        if (std::find(v.begin(), v.end(), 0u) != v.end()) throw ConfigError(std::string(what) + " percents must be positive");
        if (std::set<unsigned>(v.begin(), v.end()).size() != v.size()) throw ConfigError(std::string(what) + " list has duplicates");
    };
    if (has(Family::smote_under) || has(Family::replicate)) {
        check_percents(over_percents, "over-sampling");
        if (!include_unsampled) check_percents(under_percents, "under-sampling");
    }
    if (has(Family::plain_under) || !under_percents.empty()) {
        check_percents(under_percents, "under-sampling");
    }
    if (has(Family::priors_sweep)) {
        if (prior_multipliers.empty()) throw ConfigError("prior multiplier list is empty");
        for (double m : prior_multipliers) {
            if (!(m > 0) || !std::isfinite(m)) throw ConfigError("prior multipliers must be positive");
        }
        if (classifier.kind != ClassifierKind::naive_bayes) {
            throw ConfigError("priors_sweep requires the built-in Naive Bayes classifier");
        }
    }
    if (has(Family::threshold_sweep)) {
        if (thresholds.empty()) throw ConfigError("threshold list is empty");
        for (double t : thresholds) {
            if (!(t >= 0 && t <= 1)) throw ConfigError("thresholds must lie in [0,1]");
        }
    }
    if (k == 0) throw ConfigError("k must be at least 1");
    if (n_folds < 2) throw ConfigError("n_folds must be at least 2");
    if (variant == Variant::replicate && has(Family::smote_under)) {
        throw ConfigError("variant 'replicate' is selected through the replicate family");
    }
    if (!(classifier.threshold >= 0 && classifier.threshold <= 1)) {
        throw ConfigError("classifier threshold must lie in [0,1]");
    }
    if (!(classifier.prior_multiplier > 0)) throw ConfigError("prior multiplier must be positive");
    if (classifier.kind == ClassifierKind::external && classifier.external_command.empty()) {
        throw ConfigError("external classifier needs a command");
    }
}

std::string ExperimentConfig::to_json_text() const {
    json j;
    j["families"] = json::array();
    for (auto f : families) j["families"].push_back(std::string(to_string(f)));
    j["over_percents"] = over_percents;
    j["under_percents"] = under_percents;
    j["prior_multipliers"] = prior_multipliers;
    j["thresholds"] = thresholds;
    j["k"] = k;
    j["n_folds"] = n_folds;
    j["seed"] = seed;
    j["variant"] = variant ? std::string(to_string(*variant)) : std::string("auto");
    j["gap_mode"] = std::string(to_string(gap_mode));
    j["neighbor_mode"] = std::string(to_string(neighbor_mode));
    j["under_basis"] = std::string(to_string(under_basis));
    j["include_unsampled"] = include_unsampled;
    j["left_anchor"] = std::string(to_string(left_anchor));
    j["classifier"] = {{"kind", std::string(to_string(classifier.kind))},
                       {"prior_multiplier", classifier.prior_multiplier},
                       {"threshold", classifier.threshold},
                       {"external_command", classifier.external_command}};
    j["threads"] = threads;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("experiment config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    ExperimentConfig c;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "families") {
                c.families.clear();
                for (const auto& f : v) c.families.push_back(parse_family(f.get<std::string>()));
            } else if (key == "over_percents") {
                c.over_percents = v.get<std::vector<unsigned>>();
            } else if (key == "under_percents") {
                c.under_percents = v.get<std::vector<unsigned>>();
            } else if (key == "prior_multipliers") {
                c.prior_multipliers = v.get<std::vector<double>>();
            } else if (key == "thresholds") {
                c.thresholds = v.get<std::vector<double>>();
            } else if (key == "k") {
                c.k = v.get<std::size_t>();
            } else if (key == "n_folds") {
                c.n_folds = v.get<std::size_t>();
            } else if (key == "seed") {
                c.seed = v.get<std::uint64_t>();
            } else if (key == "variant") {
                const auto s = v.get<std::string>();
                c.variant = s == "auto" ? std::nullopt : std::optional<Variant>(parse_variant(s));
            } else if (key == "gap_mode") {
                c.gap_mode = parse_gap_mode(v.get<std::string>());
            } else if (key == "neighbor_mode") {
                c.neighbor_mode = parse_neighbor_mode(v.get<std::string>());
            } else if (key == "under_basis") {
                c.under_basis = parse_under_basis(v.get<std::string>());
            } else if (key == "include_unsampled") {
                c.include_unsampled = v.get<bool>();
            } else if (key == "left_anchor") {
                c.left_anchor = parse_left_anchor(v.get<std::string>());
            } else if (key == "threads") {
                c.threads = v.get<unsigned>();
            } else if (key == "classifier") {
                for (const auto& [ck, cv] : v.items()) {
                    if (ck == "kind") {
                        c.classifier.kind = parse_classifier_kind(cv.get<std::string>());
                    } else if (ck == "prior_multiplier") {
                        c.classifier.prior_multiplier = cv.get<double>();
                    } else if (ck == "threshold") {
                        c.classifier.threshold = cv.get<double>();
                    } else if (ck == "external_command") {
                        c.classifier.external_command = cv.get<std::string>();
                    } else {
                        throw ConfigError("unknown classifier key: " + ck);
                    }
                }
            } else {
                throw ConfigError("unknown experiment config key: " + key);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("experiment config has a value of the wrong type: ") + e.what());
    }
    return c;
}

// ---------------------------------------------------------------------------
// Grid

namespace {

struct Cell {
    std::string curve;
    Family family;
    std::string tag;
    unsigned over = 0;
    unsigned under = 0;
    double prior = 1.0;
    double threshold = 0.5;
};

/// A unit of work: one cell, or a whole threshold sweep (one model per fold
/// serves every threshold).
struct Job {
    std::vector<Cell> cells;
    std::vector<CellRecord> records;
    std::vector<std::string> warnings;
    std::size_t audited = 0;
    std::exception_ptr error;
};

std::string under_tag(unsigned under) { return under == 0 ? "under=none" : "under=" + std::to_string(under); }

std::vector<Job> plan_jobs(const ExperimentConfig& cfg) {
    std::vector<Job> jobs;
    auto resampling_curve = [&](Family fam, const std::string& curve, unsigned over) {
        std::vector<unsigned> unders;
        if (cfg.include_unsampled) unders.push_back(0);
        unders.insert(unders.end(), cfg.under_percents.begin(), cfg.under_percents.end());
        for (auto u : unders) {
            Job j;
            j.cells.push_back(Cell{curve, fam, under_tag(u), over, u, cfg.classifier.prior_multiplier,
                                   cfg.classifier.threshold});
            jobs.push_back(std::move(j));
        }
    };
    for (auto fam : cfg.families) {
        switch (fam) {
            case Family::plain_under:
                resampling_curve(fam, "plain_under", 0);
                break;
            case Family::smote_under:
            case Family::replicate:
                for (auto over : cfg.over_percents) {
                    resampling_curve(fam, std::string(to_string(fam)) + "@" + std::to_string(over), over);
                }
                break;
            case Family::priors_sweep:
                for (double m : cfg.prior_multipliers) {
                    Job j;
                    j.cells.push_back(Cell{"priors_sweep", fam, "prior=" + format_real(m), 0, 0, m,
                                           cfg.classifier.threshold});
                    jobs.push_back(std::move(j));
                }
                break;
            case Family::threshold_sweep: {
                Job j;
                for (double t : cfg.thresholds) {
                    j.cells.push_back(Cell{"threshold_sweep", fam, "threshold=" + format_real(t), 0, 0,
                                           cfg.classifier.prior_multiplier, t});
                }
                jobs.push_back(std::move(j));
                break;
            }
        }
    }
    return jobs;
}

struct FoldData {
    std::vector<std::size_t> train_idx;
    Dataset train;
    Dataset test;
};

CellRecord new_record(const Cell& c) {
    CellRecord r;
    r.curve = c.curve;
    r.family = c.family;
    r.tag = c.tag;
    r.over_percent = c.over;
    r.under_percent = c.under;
    r.prior_multiplier = c.prior;
    r.threshold = c.threshold;
    return r;
}

ConfusionMatrix score_fold(const std::vector<double>& scores, const Dataset& test, double threshold) {
    std::vector<ClassLabel> predicted;
    predicted.reserve(scores.size());
    for (double s : scores) predicted.push_back(label_for_score(s, threshold));
    return confusion(predicted, test.labels());
}

void run_job(Job& job, const std::vector<FoldData>& folds, const FoldAssignment& assignment,
             const ExperimentConfig& cfg, Variant variant) {
    for (const auto& c : job.cells) job.records.push_back(new_record(c));
    const Cell& first = job.cells.front();
    const bool resampling = first.family == Family::plain_under || first.family == Family::smote_under ||
                            first.family == Family::replicate;

    if (resampling && first.under > 0) {
        for (std::size_t f = 0; f < folds.size(); ++f) {
            const auto& tr = folds[f].train;
            if (majority_target(tr.minority_count(), first.under, tr.majority_count()) == 0) {
                auto& rec = job.records.front();
                rec.skipped = true;
                rec.skip_reason = "under-sampling at " + std::to_string(first.under) +
                                  "% leaves no majority rows in fold " + std::to_string(f);
                job.warnings.push_back(first.curve + " " + first.tag + " skipped: " + rec.skip_reason);
                return;
            }
        }
    }

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto& fd = folds[f];
        const std::string stream = first.curve + "/" + first.tag + "/fold=" + std::to_string(f);
        std::vector<double> scores;
        std::size_t minority = fd.train.minority_count(), majority = fd.train.majority_count(), synthetic = 0;
        if (resampling) {
            PlanOptions opt;
            opt.over_percent = first.over;
            opt.under_percent = first.under;
            opt.k = cfg.k;
            opt.seed = Rng::stream_seed(cfg.seed, stream);
            opt.variant = first.family == Family::replicate ? Variant::replicate : variant;
            opt.gap_mode = cfg.gap_mode;
            opt.neighbor_mode = cfg.neighbor_mode;
            opt.under_basis = cfg.under_basis;
            const auto aug = apply_plan(fd.train, opt);
            // Provenance must point at training rows of this fold.
            for (const auto& p : aug.batch.provenance) {
                const auto base = fd.train_idx.at(p.base_index);
                const bool leak = assignment.fold_of(base) == f ||
                                  (p.neighbor_index && assignment.fold_of(fd.train_idx.at(*p.neighbor_index)) == f);
                if (leak) {
                    throw Error("synthetic row references a test-fold row (fold " + std::to_string(f) + ")");
                }
                ++job.audited;
            }
            minority = aug.data.minority_count();
            majority = aug.data.majority_count();
            synthetic = aug.batch.size();
            ClassifierSpec spec = cfg.classifier;
            spec.prior_multiplier = first.prior;
            scores = train_and_score(aug.data, fd.test, spec);
        } else {
            ClassifierSpec spec = cfg.classifier;
            spec.prior_multiplier = first.prior;
            scores = train_and_score(fd.train, fd.test, spec);
        }
        for (std::size_t c = 0; c < job.cells.size(); ++c) {
            auto& rec = job.records[c];
            rec.folds.push_back(score_fold(scores, fd.test, job.cells[c].threshold));
            rec.train_minority.push_back(minority);
            rec.train_majority.push_back(majority);
            rec.synthetic.push_back(synthetic);
        }
    }
    for (auto& rec : job.records) {
        rec.point = average_rates(CellFolds{rec.tag, rec.folds});
    }
}

}  // namespace

ExperimentResult run_experiment(const Dataset& ds, const ExperimentConfig& cfg) {
    cfg.validate();
    const Variant variant = cfg.variant.value_or(variant_for(ds.schema()));
    const bool wants_oversampling =
        std::find(cfg.families.begin(), cfg.families.end(), Family::smote_under) != cfg.families.end();
    if (wants_oversampling) {
        const auto& s = ds.schema();
        if (variant == Variant::smote && !s.all_continuous()) {
            throw ConfigError("variant smote needs an all-continuous schema; try smote-nc or smote-n");
        }
        if (variant == Variant::smote_nc && s.continuous_indices().empty()) {
            throw ConfigError("variant smote-nc needs a continuous feature; try smote-n");
        }
        if (variant == Variant::smote_n && !s.all_nominal()) {
            throw ConfigError("variant smote-n needs an all-nominal schema");
        }
    }

    const auto assignment = stratified_folds(ds, cfg.n_folds, Rng::stream_seed(cfg.seed, "folds"));
    std::vector<FoldData> folds;
    folds.reserve(cfg.n_folds);
    for (std::size_t f = 0; f < cfg.n_folds; ++f) {
        auto train_idx = assignment.train_indices(f);
        const auto test_idx = assignment.test_indices(f);
        auto train = ds.subset(train_idx);
        auto test = ds.subset(test_idx);
        folds.push_back(FoldData{std::move(train_idx), std::move(train), std::move(test)});
    }

    auto jobs = plan_jobs(cfg);
    unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(jobs.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                run_job(jobs[i], folds, assignment, cfg, variant);
            } catch (...) {
                jobs[i].error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
        worker();
    }

    ExperimentResult result;
    result.config = cfg;
    result.variant = variant;
    for (auto& job : jobs) {
        if (job.error) std::rethrow_exception(job.error);
    }
    for (auto& job : jobs) {
        for (auto& w : job.warnings) {
            warn(w);
            result.warnings.push_back(std::move(w));
        }
        result.audited_synthetic_rows += job.audited;
        for (auto& r : job.records) result.cells.push_back(std::move(r));
    }

    // Curves in first-appearance order of their label.
    std::vector<std::string> order;
    for (const auto& r : result.cells) {
        if (std::find(order.begin(), order.end(), r.curve) == order.end()) order.push_back(r.curve);
    }
    for (const auto& label : order) {
        std::vector<CellFolds> cells;
        unsigned over = 0;
        for (const auto& r : result.cells) {
            if (r.curve != label) continue;
            over = r.over_percent;
            if (!r.skipped) cells.push_back(CellFolds{r.tag, r.folds});
        }
        if (cells.empty()) {
            const auto msg = "curve " + label + " has no evaluated cells";
            warn(msg);
            result.warnings.push_back(msg);
            continue;
        }
        auto curve = build_family_curve(label, cells);
        result.aucs.push_back(CurveSummary{label, family_of_curve(label), over, curve.points.size(),
                                           auc(curve, cfg.left_anchor)});
        result.curves.push_back(std::move(curve));
    }
    result.hull = convex_hull(result.curves);
    return result;
}

}  // namespace smotekit
