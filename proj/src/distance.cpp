#include "smotekit/distance.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "smotekit/error.hpp"

namespace smotekit {

namespace {

void check_lengths(FeatureView a, FeatureView b, const FeatureSchema& schema) {
    if (a.size() != schema.size() || b.size() != schema.size()) {
        throw DataError("feature vector length does not match the schema");
    }
}

double int_pow(double base, int e) {
    double out = 1.0;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

}  // namespace

double euclidean(FeatureView a, FeatureView b, const FeatureSchema& schema) {
    check_lengths(a, b, schema);
    if (!schema.all_continuous()) {
        throw ConfigError("euclidean distance requires an all-continuous schema");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

NcDistanceParams compute_med(const std::vector<FeatureVector>& minority_rows, const FeatureSchema& schema) {
    if (minority_rows.empty()) {
        throw DataError("compute_med needs at least one minority row");
    }
    const auto& cont = schema.continuous_indices();
    if (cont.empty()) {
        throw ConfigError("compute_med needs a continuous feature; use SMOTE-N for all-nominal data");
    }
    const double n = static_cast<double>(minority_rows.size());
    std::vector<double> stds;
    stds.reserve(cont.size());
    for (auto f : cont) {
        if (minority_rows.size() < 2) {
            stds.push_back(0.0);
            continue;
        }
        double mean = 0.0;
        for (const auto& r : minority_rows) mean += r.at(f);
        mean /= n;
        double ss = 0.0;
        for (const auto& r : minority_rows) {
            const double d = r[f] - mean;
            ss += d * d;
        }
        stds.push_back(std::sqrt(ss / (n - 1.0)));
    }
    std::sort(stds.begin(), stds.end());
    const std::size_t m = stds.size();
    const double med = (m % 2 == 1) ? stds[m / 2] : 0.5 * (stds[m / 2 - 1] + stds[m / 2]);
    return NcDistanceParams{med};
}

double nc_distance(FeatureView a, FeatureView b, const FeatureSchema& schema, const NcDistanceParams& params) {
    check_lengths(a, b, schema);
    const double penalty = params.med * params.med;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (schema.kind(i) == FeatureKind::continuous) {
            const double d = a[i] - b[i];
            sum += d * d;
        } else if (a[i] != b[i]) {
            sum += penalty;
        }
    }
    return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// VDM

VdmTable::VdmTable(FeatureSchema schema, std::vector<std::vector<ValueCounts>> counts, int k_exp, int r)
    : schema_(std::move(schema)), counts_(std::move(counts)), k_exp_(k_exp), r_(r) {
    if (k_exp_ < 1 || r_ < 1) {
        throw ConfigError("VDM exponents k and r must be positive integers");
    }
    if (counts_.size() != schema_.size()) {
        throw ConfigError("VDM count table does not match the schema");
    }
    for (std::size_t f = 0; f < counts_.size(); ++f) {
        for (const auto& c : counts_[f]) {
            if (c.per_class[0] + c.per_class[1] != c.total) {
                throw DataError("VDM per-class counts do not sum to the total");
            }
        }
    }
}

VdmTable VdmTable::build(const Dataset& train, int k_exp, int r) {
    const auto& schema = train.schema();
    std::vector<std::vector<ValueCounts>> counts(schema.size());
    for (auto f : schema.nominal_indices()) {
        counts[f].resize(train.categories().category_count(f));
    }
    for (std::size_t i = 0; i < train.size(); ++i) {
        const auto cls = static_cast<std::size_t>(train.label(i));
        for (auto f : schema.nominal_indices()) {
            auto& c = counts[f][category_code(train.row(i)[f])];
            ++c.total;
            ++c.per_class[cls];
        }
    }
    return VdmTable(schema, std::move(counts), k_exp, r);
}

const VdmTable::ValueCounts& VdmTable::counts(std::size_t feature, std::size_t value) const {
    if (feature >= counts_.size() || schema_.kind(feature) != FeatureKind::nominal) {
        throw ConfigError("VDM lookup on a non-nominal feature");
    }
    const auto& per_value = counts_[feature];
    if (value >= per_value.size() || per_value[value].total == 0) {
        throw DataError("category value unseen in VDM table for feature '" + schema_.feature(feature).name + "'");
    }
    return per_value[value];
}

double VdmTable::delta(std::size_t feature, std::size_t v1, std::size_t v2) const {
    const auto& a = counts(feature, v1);
    const auto& b = counts(feature, v2);
    if (v1 == v2) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t cls = 0; cls < 2; ++cls) {
        const double p = static_cast<double>(a.per_class[cls]) / static_cast<double>(a.total);
        const double q = static_cast<double>(b.per_class[cls]) / static_cast<double>(b.total);
        sum += int_pow(std::fabs(p - q), k_exp_);
    }
    return sum;
}

double VdmTable::distance(FeatureView x, FeatureView y) const {
    check_lengths(x, y, schema_);
    if (!schema_.all_nominal()) {
        throw ConfigError("VDM distance requires an all-nominal schema");
    }
    double sum = 0.0;
    for (std::size_t f = 0; f < x.size(); ++f) {
        sum += int_pow(delta(f, category_code(x[f]), category_code(y[f])), r_);
    }
    return sum;
}

double vdm_delta(const VdmTable& table, std::size_t feature, std::size_t v1, std::size_t v2) {
    return table.delta(feature, v1, v2);
}

double vdm_distance(const VdmTable& table, FeatureView x, FeatureView y) {
    return table.distance(x, y);
}

Metric euclidean_metric(const FeatureSchema& schema) {
    if (!schema.all_continuous()) {
        throw ConfigError("euclidean distance requires an all-continuous schema");
    }
    return [schema](FeatureView a, FeatureView b) { return euclidean(a, b, schema); };
}

Metric nc_metric(const FeatureSchema& schema, NcDistanceParams params) {
    return [schema, params](FeatureView a, FeatureView b) { return nc_distance(a, b, schema, params); };
}

Metric vdm_metric(const VdmTable& table) {
    auto shared = std::make_shared<const VdmTable>(table);
    return [shared](FeatureView a, FeatureView b) { return shared->distance(a, b); };
}

}  // namespace smotekit
