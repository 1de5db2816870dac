#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smotekit/data.hpp"

namespace smotekit {

/// 2x2 table with the minority class as the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const ClassLabel> predicted, std::span<const ClassLabel> actual);

/// Ratios are fractions in [0,1], except tp_rate and fp_rate which are
/// percentages. A ratio whose denominator is zero is absent.
struct Metrics {
    double accuracy = 0;
    double error_rate = 0;
    std::optional<double> tp_rate;
    std::optional<double> fp_rate;
    std::optional<double> precision;
    std::optional<double> recall;
};

Metrics metrics(const ConfusionMatrix& cm);

struct RocPoint {
    double fp_rate = 0;  // percent
    double tp_rate = 0;  // percent
    std::string tag;

    bool operator==(const RocPoint&) const = default;
};

struct RocCurve {
    std::string family;
    std::vector<RocPoint> points;
};

/// Sorts by (fp_rate, tp_rate) and drops coordinate duplicates, keeping the
/// first tag seen.
void sort_points(std::vector<RocPoint>& points);

/// Sorted copy of the curve ending in (100,100).
RocCurve finalize(const RocCurve& curve);

/// origin joins (0,0) to the leftmost measured point so every curve spans
/// fp in [0,100]; none integrates from the leftmost measured point only,
/// counting the region to its left as zero area.
enum class LeftAnchor { origin, none };

std::string_view to_string(LeftAnchor a);
LeftAnchor parse_left_anchor(std::string_view s);

/// Trapezoid-rule area after appending (100,100), as a fraction of the full
/// 100x100 ROC square.
double auc(const RocCurve& curve, LeftAnchor anchor = LeftAnchor::origin);

/// AUC as a x10^4 integer (0.7242 -> 7242).
long auc_x10000(double auc_fraction);

struct HullVertex {
    RocPoint point;
    std::string family;  // "anchor" for the (0,0) and (100,100) end points
};

/// Upper-left ROC convex hull over every point of every curve plus the
/// anchors (0,0) and (100,100), by monotone chain. Dominated, interior and
/// collinear points are dropped; vertices come back sorted by fp_rate.
std::vector<HullVertex> convex_hull(const std::vector<RocCurve>& curves);

/// One grid cell's per-fold confusion matrices.
struct CellFolds {
    std::string tag;
    std::vector<ConfusionMatrix> folds;
};

/// Mean of per-fold (percent) rates for one cell. Folds where a rate is
/// undefined are left out of that rate's mean.
RocPoint average_rates(const CellFolds& cell);

/// One point per cell from fold-averaged rates, sorted, duplicates collapsed.
RocCurve build_family_curve(const std::string& family, const std::vector<CellFolds>& cells);

}  // namespace smotekit
