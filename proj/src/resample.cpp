#include "smotekit/resample.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "smotekit/distance.hpp"
#include "smotekit/error.hpp"

namespace smotekit {

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::smote: return "smote";
        case Variant::smote_nc: return "smote-nc";
        case Variant::smote_n: return "smote-n";
        case Variant::replicate: return "replicate";
    }
    return "?";
}

std::string_view to_string(GapMode m) { return m == GapMode::shared ? "shared" : "per-attribute"; }

std::string_view to_string(NeighborMode m) {
    return m == NeighborMode::distinct ? "distinct" : "with-replacement";
}

std::string_view to_string(UnderBasis b) { return b == UnderBasis::post_smote ? "post" : "pre"; }

Variant parse_variant(std::string_view s) {
    if (s == "smote") return Variant::smote;
    if (s == "smote-nc" || s == "smote_nc") return Variant::smote_nc;
    if (s == "smote-n" || s == "smote_n") return Variant::smote_n;
    if (s == "replicate") return Variant::replicate;
    throw ConfigError("unknown variant: " + std::string(s));
}

GapMode parse_gap_mode(std::string_view s) {
    if (s == "per-attribute") return GapMode::per_attribute;
    if (s == "shared") return GapMode::shared;
    throw ConfigError("unknown gap mode: " + std::string(s));
}

NeighborMode parse_neighbor_mode(std::string_view s) {
    if (s == "with-replacement") return NeighborMode::with_replacement;
    if (s == "distinct") return NeighborMode::distinct;
    throw ConfigError("unknown neighbor mode: " + std::string(s));
}

UnderBasis parse_under_basis(std::string_view s) {
    if (s == "pre") return UnderBasis::pre_smote;
    if (s == "post") return UnderBasis::post_smote;
    throw ConfigError("unknown under-sampling basis: " + std::string(s));
}

Variant variant_for(const FeatureSchema& schema) {
    if (schema.all_continuous()) return Variant::smote;
    if (schema.all_nominal()) return Variant::smote_n;
    return Variant::smote_nc;
}

SmoteCounts smote_counts(unsigned n_percent, std::size_t t) {
    if (n_percent == 0 || t == 0) {
        return {};
    }
    if (n_percent < 100) {
        return {static_cast<std::size_t>(n_percent) * t / 100, 1};
    }
    return {t, n_percent / 100};
}

std::size_t nominal_vote(std::span<const std::size_t> codes, std::optional<std::size_t> preferred) {
    if (codes.empty()) {
        throw DataError("nominal vote over an empty set");
    }
    std::map<std::size_t, std::size_t> tally;
    for (auto c : codes) ++tally[c];
    std::size_t best_count = 0;
    for (const auto& [code, n] : tally) best_count = std::max(best_count, n);
    if (preferred) {
        auto it = tally.find(*preferred);
        if (it != tally.end() && it->second == best_count) {
            return *preferred;
        }
    }
    for (const auto& [code, n] : tally) {
        if (n == best_count) return code;  // map order: lowest code first
    }
    return codes.front();
}

namespace {

enum class NominalRule { none, neighbors_only, base_and_neighbors };

void check_inputs(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                  const NeighborList& neighbors) {
    if (minority.size() < 2) {
        throw DataError("over-sampling needs at least two minority samples");
    }
    if (neighbors.size() != minority.size()) {
        throw ConfigError("neighbor list does not match the minority set");
    }
    for (const auto& r : minority) {
        if (r.size() != schema.size()) {
            throw DataError("minority row length does not match the schema");
        }
    }
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        if (neighbors.of(i).empty()) {
            throw ConfigError("empty neighbor list");
        }
        for (auto j : neighbors.of(i)) {
            if (j >= minority.size() || j == i) {
                throw ConfigError("invalid neighbor index");
            }
        }
    }
}

std::vector<std::size_t> choose_bases(const SmoteCounts& counts, std::size_t t, RandomSource& rng) {
    std::vector<std::size_t> bases;
    if (counts.bases == t) {
        bases.resize(t);
        std::iota(bases.begin(), bases.end(), std::size_t{0});
        return bases;
    }
    auto order = random_permutation(t, rng);
    bases.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(counts.bases));
    std::sort(bases.begin(), bases.end());
    return bases;
}

/// Picks which neighbor-list positions feed each of `reps` synthetic rows.
class NeighborPicker {
public:
    NeighborPicker(std::size_t list_size, NeighborMode mode, RandomSource& rng)
        : size_(list_size), mode_(mode), rng_(rng) {}

    std::size_t next() {
        if (mode_ == NeighborMode::with_replacement) {
            return rng_.below(size_);
        }
        if (cursor_ == order_.size()) {
            order_ = random_permutation(size_, rng_);
            cursor_ = 0;
        }
        return order_[cursor_++];
    }

private:
    std::size_t size_;
    NeighborMode mode_;
    RandomSource& rng_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
};

SyntheticBatch interpolate(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                           const SmoteParams& params, const NeighborList& neighbors, RandomSource& rng,
                           NominalRule nominal_rule) {
    SyntheticBatch batch;
    const auto counts = smote_counts(params.n_percent, minority.size());
    if (counts.total() == 0) {
        return batch;
    }
    check_inputs(minority, schema, neighbors);
    const auto bases = choose_bases(counts, minority.size(), rng);
    batch.rows.reserve(counts.total());
    batch.provenance.reserve(counts.total());

    const auto& cont = schema.continuous_indices();
    const auto& nom = schema.nominal_indices();
    std::vector<std::size_t> votes;

    for (auto i : bases) {
        const auto& base = minority[i];
        const auto& nn = neighbors.of(i);

        // Nominal values depend only on the base and its neighbor list.
        FeatureVector nominal_values(schema.size(), 0.0);
        for (auto f : nom) {
            votes.clear();
            if (nominal_rule == NominalRule::base_and_neighbors) {
                votes.push_back(category_code(base[f]));
            }
            for (auto j : nn) votes.push_back(category_code(minority[j][f]));
            nominal_values[f] = static_cast<double>(nominal_vote(votes, category_code(base[f])));
        }

        NeighborPicker picker(nn.size(), params.neighbor_mode, rng);
        for (std::size_t rep = 0; rep < counts.per_base; ++rep) {
            const std::size_t j = nn[picker.next()];
            const auto& other = minority[j];
            FeatureVector synthetic = base;
            Provenance prov{i, j, {}};
            if (params.gap_mode == GapMode::shared) {
                const double gap = rng.unit();
                prov.gaps.push_back(gap);
                for (auto f : cont) {
                    synthetic[f] = base[f] + gap * (other[f] - base[f]);
                }
            } else {
                prov.gaps.reserve(cont.size());
                for (auto f : cont) {
                    const double dif = other[f] - base[f];
                    const double gap = rng.unit();
                    prov.gaps.push_back(gap);
                    synthetic[f] = base[f] + gap * dif;
                }
            }
            for (auto f : nom) synthetic[f] = nominal_values[f];
            batch.rows.push_back(std::move(synthetic));
            batch.provenance.push_back(std::move(prov));
        }
    }
    return batch;
}

}  // namespace

SyntheticBatch smote(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                     const SmoteParams& params, const NeighborList& neighbors, RandomSource& rng) {
    if (!schema.all_continuous()) {
        throw ConfigError("SMOTE requires an all-continuous schema; use SMOTE-NC or SMOTE-N");
    }
    return interpolate(minority, schema, params, neighbors, rng, NominalRule::none);
}

SyntheticBatch smote(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                     const SmoteParams& params, const NeighborList& neighbors) {
    Rng rng(params.seed);
    return smote(minority, schema, params, neighbors, rng);
}

SyntheticBatch smote_nc(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                        const SmoteParams& params, const NeighborList& neighbors, RandomSource& rng) {
    if (schema.continuous_indices().empty()) {
        throw ConfigError("SMOTE-NC requires a continuous feature; use SMOTE-N for all-nominal data");
    }
    return interpolate(minority, schema, params, neighbors, rng, NominalRule::neighbors_only);
}

SyntheticBatch smote_nc(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                        const SmoteParams& params, const NeighborList& neighbors) {
    Rng rng(params.seed);
    return smote_nc(minority, schema, params, neighbors, rng);
}

SyntheticBatch smote_n(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                       const SmoteParams& params, const NeighborList& neighbors, RandomSource& rng) {
    if (!schema.all_nominal()) {
        throw ConfigError("SMOTE-N requires an all-nominal schema");
    }
    SyntheticBatch batch;
    const auto counts = smote_counts(params.n_percent, minority.size());
    if (counts.total() == 0) {
        return batch;
    }
    check_inputs(minority, schema, neighbors);
    std::vector<std::size_t> votes;
    for (auto i : choose_bases(counts, minority.size(), rng)) {
        const auto& base = minority[i];
        FeatureVector synthetic(schema.size());
        for (std::size_t f = 0; f < schema.size(); ++f) {
            votes.clear();
            votes.push_back(category_code(base[f]));
            for (auto j : neighbors.of(i)) votes.push_back(category_code(minority[j][f]));
            synthetic[f] = static_cast<double>(nominal_vote(votes, category_code(base[f])));
        }
        for (std::size_t rep = 0; rep < counts.per_base; ++rep) {
            batch.rows.push_back(synthetic);
            batch.provenance.push_back(Provenance{i, std::nullopt, {}});
        }
    }
    return batch;
}

SyntheticBatch smote_n(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                       const SmoteParams& params, const NeighborList& neighbors) {
    Rng rng(params.seed);
    return smote_n(minority, schema, params, neighbors, rng);
}

SyntheticBatch replicate_oversample(const std::vector<FeatureVector>& minority, unsigned n_percent,
                                    RandomSource& rng) {
    SyntheticBatch batch;
    const auto total = smote_counts(n_percent, minority.size()).total();
    batch.rows.reserve(total);
    batch.provenance.reserve(total);
    for (std::size_t n = 0; n < total; ++n) {
        const std::size_t i = rng.below(minority.size());
        batch.rows.push_back(minority[i]);
        batch.provenance.push_back(Provenance{i, i, {0.0}});
    }
    return batch;
}

SyntheticBatch replicate_oversample(const std::vector<FeatureVector>& minority, unsigned n_percent,
                                    std::uint64_t seed) {
    Rng rng(seed);
    return replicate_oversample(minority, n_percent, rng);
}

std::size_t majority_target(std::size_t minority, unsigned percent, std::size_t majority) {
    if (percent == 0) {
        throw ConfigError("under-sampling percent must be positive");
    }
    // Round half up in integer arithmetic: floor((200*m + p) / (2p)).
    const std::uint64_t p = percent;
    const std::uint64_t target = (200 * static_cast<std::uint64_t>(minority) + p) / (2 * p);
    return static_cast<std::size_t>(std::min<std::uint64_t>(target, majority));
}

std::vector<std::size_t> under_sample(std::span<const std::size_t> majority_indices, std::size_t minority_count,
                                      const UnderSamplePlan& plan) {
    const std::size_t keep = majority_target(minority_count, plan.percent, majority_indices.size());
    Rng rng(plan.seed);
    const auto order = random_permutation(majority_indices.size(), rng);
    std::vector<std::size_t> out;
    out.reserve(keep);
    for (std::size_t n = 0; n < keep; ++n) out.push_back(majority_indices[order[n]]);
    std::sort(out.begin(), out.end());
    return out;
}

AugmentedDataset apply_plan(const Dataset& train, const PlanOptions& options) {
    const auto& schema = train.schema();
    const auto minority_idx = train.indices_of(ClassLabel::minority);
    const auto majority_idx = train.indices_of(ClassLabel::majority);

    SyntheticBatch batch;
    if (options.over_percent > 0) {
        const auto minority = train.rows_of(ClassLabel::minority);
        SmoteParams params;
        params.n_percent = options.over_percent;
        params.k = options.k;
        params.gap_mode = options.gap_mode;
        params.neighbor_mode = options.neighbor_mode;
        Rng rng = Rng::stream(options.seed, "over");
        switch (options.variant) {
            case Variant::smote: {
                const auto nn = knn_minority(minority, options.k, euclidean_metric(schema));
                batch = smote(minority, schema, params, nn, rng);
                break;
            }
            case Variant::smote_nc: {
                const auto med = compute_med(minority, schema);
                const auto nn = knn_minority(minority, options.k, nc_metric(schema, med));
                batch = smote_nc(minority, schema, params, nn, rng);
                break;
            }
            case Variant::smote_n: {
                if (!schema.all_nominal()) {
                    throw ConfigError("SMOTE-N requires an all-nominal schema");
                }
                const auto table = VdmTable::build(train, options.vdm_k_exp, options.vdm_r);
                const auto nn = knn_minority(minority, options.k, vdm_metric(table));
                batch = smote_n(minority, schema, params, nn, rng);
                break;
            }
            case Variant::replicate:
                batch = replicate_oversample(minority, options.over_percent, rng);
                break;
        }
        for (auto& p : batch.provenance) {
            p.base_index = minority_idx[p.base_index];
            if (p.neighbor_index) p.neighbor_index = minority_idx[*p.neighbor_index];
        }
    }

    std::vector<std::size_t> retained = majority_idx;
    if (options.under_percent > 0) {
        const std::size_t basis = options.under_basis == UnderBasis::pre_smote
                                      ? minority_idx.size()
                                      : minority_idx.size() + batch.size();
        retained = under_sample(majority_idx, basis,
                                UnderSamplePlan{options.under_percent, Rng::stream_seed(options.seed, "under")});
    }

    std::vector<FeatureVector> rows;
    std::vector<ClassLabel> labels;
    std::vector<RowOrigin> source;
    const std::size_t total = minority_idx.size() + batch.size() + retained.size();
    rows.reserve(total);
    labels.reserve(total);
    source.reserve(total);
    for (auto i : minority_idx) {
        rows.push_back(train.row(i));
        labels.push_back(ClassLabel::minority);
        source.push_back(RowOrigin{false, i});
    }
    for (std::size_t b = 0; b < batch.rows.size(); ++b) {
        rows.push_back(batch.rows[b]);
        labels.push_back(ClassLabel::minority);
        source.push_back(RowOrigin{true, b});
    }
    for (auto i : retained) {
        rows.push_back(train.row(i));
        labels.push_back(ClassLabel::majority);
        source.push_back(RowOrigin{false, i});
    }
    if (options.shuffle) {
        Rng rng = Rng::stream(options.seed, "shuffle");
        const auto order = random_permutation(rows.size(), rng);
        std::vector<FeatureVector> r2;
        std::vector<ClassLabel> l2;
        std::vector<RowOrigin> s2;
        r2.reserve(total);
        l2.reserve(total);
        s2.reserve(total);
        for (auto o : order) {
            r2.push_back(std::move(rows[o]));
            l2.push_back(labels[o]);
            s2.push_back(source[o]);
        }
        rows = std::move(r2);
        labels = std::move(l2);
        source = std::move(s2);
    }
    return AugmentedDataset{
        Dataset(schema, std::move(rows), std::move(labels), train.categories(), train.class_tokens()),
        std::move(batch), std::move(source), retained.size()};
}

}  // namespace smotekit
