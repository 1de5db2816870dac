#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "smotekit/data.hpp"

namespace smotekit {

/// Distance between two rows. Implementations are pure.
using Metric = std::function<double(FeatureView, FeatureView)>;

/// Plain Euclidean distance; every feature must be continuous.
double euclidean(FeatureView a, FeatureView b, const FeatureSchema& schema);

/// Penalty applied per differing nominal feature in the mixed-type distance.
struct NcDistanceParams {
    double med = 0.0;
};

/// Median over continuous features of the per-feature sample standard
/// deviation (n-1 denominator; a single row gives 0). Even feature counts take
/// the mean of the two central values.
NcDistanceParams compute_med(const std::vector<FeatureVector>& minority_rows, const FeatureSchema& schema);

/// Euclidean over continuous features, plus med^2 for each nominal feature
/// whose codes differ. With med == 0 nominal differences cost nothing.
double nc_distance(FeatureView a, FeatureView b, const FeatureSchema& schema, const NcDistanceParams& params);

/// Value-difference table for nominal features.
///
/// For each nominal feature and category value V it holds the occurrence count
/// C and the per-class counts C_i over the rows it was built from.
///   delta(V1, V2)  = sum_i |C1i/C1 - C2i/C2|^k_exp
///   distance(x, y) = sum_f delta(x_f, y_f)^r
/// Exemplar weights are fixed at 1.
class VdmTable {
public:
    struct ValueCounts {
        std::size_t total = 0;
        std::array<std::size_t, 2> per_class{};  // indexed by ClassLabel
    };

    /// counts[f][v] for every feature f; continuous features carry empty lists.
    VdmTable(FeatureSchema schema, std::vector<std::vector<ValueCounts>> counts, int k_exp = 1, int r = 1);

    /// Counts over all rows of `train` (both classes). Never pass test rows.
    static VdmTable build(const Dataset& train, int k_exp = 1, int r = 1);

    const FeatureSchema& schema() const { return schema_; }
    int k_exp() const { return k_exp_; }
    int r() const { return r_; }
    const ValueCounts& counts(std::size_t feature, std::size_t value) const;

    double delta(std::size_t feature, std::size_t v1, std::size_t v2) const;
    double distance(FeatureView x, FeatureView y) const;

private:
    FeatureSchema schema_;
    std::vector<std::vector<ValueCounts>> counts_;
    int k_exp_;
    int r_;
};

double vdm_delta(const VdmTable& table, std::size_t feature, std::size_t v1, std::size_t v2);
double vdm_distance(const VdmTable& table, FeatureView x, FeatureView y);

Metric euclidean_metric(const FeatureSchema& schema);
Metric nc_metric(const FeatureSchema& schema, NcDistanceParams params);
Metric vdm_metric(const VdmTable& table);

}  // namespace smotekit
