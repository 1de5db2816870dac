#include "smotekit/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "smotekit/error.hpp"

namespace smotekit {

ConfusionMatrix confusion(std::span<const ClassLabel> predicted, std::span<const ClassLabel> actual) {
    if (predicted.size() != actual.size()) {
        throw DataError("predicted and actual label counts differ");
    }
    if (actual.empty()) {
        throw DataError("confusion matrix over zero rows");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const bool pos_pred = predicted[i] == ClassLabel::minority;
        const bool pos_true = actual[i] == ClassLabel::minority;
        if (pos_true) {
            (pos_pred ? cm.tp : cm.fn)++;
        } else {
            (pos_pred ? cm.fp : cm.tn)++;
        }
    }
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
    const std::size_t total = cm.total();
    if (total == 0) {
        throw DataError("metrics of an empty confusion matrix");
    }
    auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    Metrics m;
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
    m.error_rate = 1.0 - m.accuracy;
    m.recall = ratio(cm.tp, cm.tp + cm.fn);
    m.precision = ratio(cm.tp, cm.tp + cm.fp);
    if (m.recall) m.tp_rate = 100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    if (cm.tn + cm.fp > 0) m.fp_rate = 100.0 * static_cast<double>(cm.fp) / static_cast<double>(cm.tn + cm.fp);
    return m;
}

void sort_points(std::vector<RocPoint>& points) {
    std::stable_sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
        return a.fp_rate != b.fp_rate ? a.fp_rate < b.fp_rate : a.tp_rate < b.tp_rate;
    });
    points.erase(std::unique(points.begin(), points.end(),
                             [](const RocPoint& a, const RocPoint& b) {
                                 return a.fp_rate == b.fp_rate && a.tp_rate == b.tp_rate;
                             }),
                 points.end());
}

RocCurve finalize(const RocCurve& curve) {
    RocCurve out = curve;
    sort_points(out.points);
    if (out.points.empty() || out.points.back().fp_rate != 100.0 || out.points.back().tp_rate != 100.0) {
        out.points.push_back(RocPoint{100.0, 100.0, "extrapolated"});
    }
    return out;
}

std::string_view to_string(LeftAnchor a) { return a == LeftAnchor::origin ? "origin" : "none"; }

LeftAnchor parse_left_anchor(std::string_view s) {
    if (s == "origin") return LeftAnchor::origin;
    if (s == "none") return LeftAnchor::none;
    throw ConfigError("unknown left anchor: " + std::string(s));
}

double auc(const RocCurve& curve, LeftAnchor anchor) {
    if (curve.points.empty()) {
        throw DataError("AUC of an empty curve");
    }
    for (const auto& p : curve.points) {
        if (!(p.fp_rate >= 0 && p.fp_rate <= 100 && p.tp_rate >= 0 && p.tp_rate <= 100)) {
            throw DataError("ROC point outside [0,100]^2");
        }
    }
    auto pts = finalize(curve).points;
    if (anchor == LeftAnchor::origin && (pts.front().fp_rate != 0.0 || pts.front().tp_rate != 0.0)) {
        pts.insert(pts.begin(), RocPoint{0.0, 0.0, "origin"});
    }
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        area += 0.5 * (pts[i].fp_rate - pts[i - 1].fp_rate) * (pts[i].tp_rate + pts[i - 1].tp_rate);
    }
    return std::clamp(area / 10000.0, 0.0, 1.0);
}

long auc_x10000(double auc_fraction) { return std::lround(auc_fraction * 10000.0); }

std::vector<HullVertex> convex_hull(const std::vector<RocCurve>& curves) {
    std::vector<HullVertex> pts;
    pts.push_back({RocPoint{0.0, 0.0, "origin"}, "anchor"});
    for (const auto& c : curves) {
        for (const auto& p : c.points) pts.push_back({p, c.family});
    }
    pts.push_back({RocPoint{100.0, 100.0, "extrapolated"}, "anchor"});

    std::stable_sort(pts.begin(), pts.end(), [](const HullVertex& a, const HullVertex& b) {
        return a.point.fp_rate != b.point.fp_rate ? a.point.fp_rate < b.point.fp_rate
                                                  : a.point.tp_rate < b.point.tp_rate;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const HullVertex& a, const HullVertex& b) {
                              return a.point.fp_rate == b.point.fp_rate && a.point.tp_rate == b.point.tp_rate;
                          }),
              pts.end());

    // Upper chain, left to right. A point is popped unless the turn is
    // strictly clockwise, which also drops collinear middles.
    auto cross = [](const RocPoint& o, const RocPoint& a, const RocPoint& b) {
        return (a.fp_rate - o.fp_rate) * (b.tp_rate - o.tp_rate) - (a.tp_rate - o.tp_rate) * (b.fp_rate - o.fp_rate);
    };
    std::vector<HullVertex> hull;
    for (auto& p : pts) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2].point, hull.back().point, p.point) >= 0) {
            hull.pop_back();
        }
        hull.push_back(std::move(p));
    }
    return hull;
}

RocPoint average_rates(const CellFolds& cell) {
    std::vector<double> tp_rates, fp_rates;
    for (const auto& cm : cell.folds) {
        if (cm.tp + cm.fn > 0) {
            tp_rates.push_back(100.0 * static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn));
        }
        if (cm.fp + cm.tn > 0) {
            fp_rates.push_back(100.0 * static_cast<double>(cm.fp) / static_cast<double>(cm.fp + cm.tn));
        }
    }
    if (tp_rates.empty() || fp_rates.empty()) {
        throw DataError("cell '" + cell.tag + "' has no fold with both classes");
    }
    // Summed in sorted order so the mean does not depend on fold order.
    auto mean = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        double s = 0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    return RocPoint{mean(fp_rates), mean(tp_rates), cell.tag};
}

RocCurve build_family_curve(const std::string& family, const std::vector<CellFolds>& cells) {
    if (cells.empty()) {
        throw DataError("family '" + family + "' has no cells");
    }
    RocCurve curve{family, {}};
    for (const auto& c : cells) curve.points.push_back(average_rates(c));
    sort_points(curve.points);
    return curve;
}

}  // namespace smotekit
