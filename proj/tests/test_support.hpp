#pragma once

// Shared fixtures for the unit and acceptance suites: dataset builders,
// scripted random sources, and brute-force oracles that stay independent of
// the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "smotekit/data.hpp"
#include "smotekit/evaluate.hpp"
#include "smotekit/rng.hpp"

namespace smotekit::support {

/// Replays scripted draws; falls back to constant values when exhausted.
class StubRandom final : public RandomSource {
public:
    explicit StubRandom(double gap, std::size_t index = 0) : gap_(gap), index_(index) {}
    StubRandom(std::deque<double> units, std::deque<std::size_t> indices, double gap = 0.0)
        : units_(std::move(units)), indices_(std::move(indices)), gap_(gap) {}

    double unit() override {
        if (units_.empty()) return gap_;
        const double v = units_.front();
        units_.pop_front();
        return v;
    }
    std::size_t below(std::size_t n) override {
        std::size_t v = index_;
        if (!indices_.empty()) {
            v = indices_.front();
            indices_.pop_front();
        }
        return v % n;
    }

private:
    std::deque<double> units_;
    std::deque<std::size_t> indices_;
    double gap_;
    std::size_t index_ = 0;
};

inline FeatureSchema continuous_schema(std::size_t d) {
    std::vector<FeatureSpec> f;
    for (std::size_t i = 0; i < d; ++i) f.push_back({"x" + std::to_string(i), FeatureKind::continuous});
    return FeatureSchema(std::move(f), "class");
}

inline FeatureSchema nominal_schema(std::size_t d) {
    std::vector<FeatureSpec> f;
    for (std::size_t i = 0; i < d; ++i) f.push_back({"n" + std::to_string(i), FeatureKind::nominal});
    return FeatureSchema(std::move(f), "class");
}

/// Dictionary sized to the largest code present; tokens "c0", "c1", ...
inline CategoryDictionary categories_for(const FeatureSchema& schema, const std::vector<FeatureVector>& rows,
                                         std::size_t min_categories = 0) {
    CategoryDictionary d;
    d.tokens.resize(schema.size());
    for (auto f : schema.nominal_indices()) {
        std::size_t n = min_categories;
        for (const auto& r : rows) n = std::max(n, static_cast<std::size_t>(r[f]) + 1);
        for (std::size_t c = 0; c < n; ++c) d.tokens[f].push_back("c" + std::to_string(c));
    }
    return d;
}

inline Dataset make_dataset(const FeatureSchema& schema, std::vector<FeatureVector> rows,
                            std::vector<ClassLabel> labels, std::size_t min_categories = 0) {
    auto cats = categories_for(schema, rows, min_categories);
    return Dataset(schema, std::move(rows), std::move(labels), std::move(cats), ClassTokens{"pos", "neg"});
}

/// Box-Muller over the portable generator.
inline double normal(Rng& rng) {
    double u1 = rng.unit();
    while (u1 <= 0.0) u1 = rng.unit();
    const double u2 = rng.unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Two isotropic unit-variance Gaussians in `dim` dimensions; the minority
/// mean sits at `shift` on every axis. Minority rows come first.
inline Dataset gaussian_blobs(std::size_t n_major, std::size_t n_minor, std::size_t dim, double shift,
                              std::uint64_t seed) {
    Rng rng(seed);
    std::vector<FeatureVector> rows;
    std::vector<ClassLabel> labels;
    for (std::size_t i = 0; i < n_minor; ++i) {
        FeatureVector r(dim);
        for (auto& v : r) v = shift + normal(rng);
        rows.push_back(std::move(r));
        labels.push_back(ClassLabel::minority);
    }
    for (std::size_t i = 0; i < n_major; ++i) {
        FeatureVector r(dim);
        for (auto& v : r) v = normal(rng);
        rows.push_back(std::move(r));
        labels.push_back(ClassLabel::majority);
    }
    return make_dataset(continuous_schema(dim), std::move(rows), std::move(labels));
}

/// k-NN oracle: full stable sort of all candidates by distance, candidates
/// enumerated in index order so ties keep ascending index.
template <class Dist>
std::vector<std::vector<std::size_t>> knn_oracle(const std::vector<FeatureVector>& rows, std::size_t k, Dist dist) {
    std::vector<std::vector<std::size_t>> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<std::size_t> cand;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (j != i) cand.push_back(j);
        }
        std::vector<double> d(rows.size());
        for (auto j : cand) d[j] = dist(rows[i], rows[j]);
        std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
        cand.resize(std::min(k, cand.size()));
        out[i] = cand;
    }
    return out;
}

/// Integer-grid point for exact hull reasoning.
struct GridPoint {
    long x;
    long y;
    bool operator==(const GridPoint&) const = default;
};

/// Is p weakly dominated (fp <= p.fp, tp >= p.tp) by some point on a segment
/// between two candidates (a == b allowed)? Exact rational arithmetic.
inline bool weakly_dominated_by_segment(GridPoint p, GridPoint a, GridPoint b) {
    // Points a + t(b-a), t in [0,1]. Need x(t) <= p.x and y(t) >= p.y.
    // Each constraint is c + t*d <= 0 with integer c, d; track t-interval as
    // rationals num/den with den > 0.
    struct Rat {
        long num, den;
    };
    auto less = [](Rat u, Rat v) { return u.num * v.den < v.num * u.den; };
    Rat lo{0, 1}, hi{1, 1};
    auto apply = [&](long c, long d) {  // c + t*d <= 0
        if (d == 0) return c <= 0;
        if (d > 0) {
            Rat bound{-c, d};  // t <= -c/d
            if (less(bound, hi)) hi = bound;
        } else {
            Rat bound{c, -d};  // t >= c/(-d)
            if (less(lo, bound)) lo = bound;
        }
        return true;
    };
    if (!apply(a.x - p.x, b.x - a.x)) return false;
    if (!apply(p.y - a.y, -(b.y - a.y))) return false;
    return !less(hi, lo);
}

/// Hull membership oracle over distinct points plus the (0,0) and (100,100)
/// anchors: a point is a hull vertex iff no segment between two other points
/// weakly dominates it. O(n^3).
inline std::vector<bool> hull_membership_oracle(const std::vector<GridPoint>& pts) {
    std::vector<GridPoint> all = pts;
    all.push_back({0, 0});
    all.push_back({100, 100});
    std::vector<bool> on(pts.size(), true);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t a = 0; a < all.size() && on[i]; ++a) {
            if (all[a] == pts[i]) continue;
            for (std::size_t b = a; b < all.size(); ++b) {
                if (all[b] == pts[i]) continue;
                if (weakly_dominated_by_segment(pts[i], all[a], all[b])) {
                    on[i] = false;
                    break;
                }
            }
        }
    }
    return on;
}

/// Midpoint Riemann sum of the piecewise-linear curve through `pts` (already
/// sorted by fp, anchored at fp=0 and fp=100) with `strips` strips, as a
/// fraction of the unit ROC square.
inline double riemann_auc(std::vector<std::pair<double, double>> pts, std::size_t strips) {
    const double h = 100.0 / static_cast<double>(strips);
    double sum = 0.0, comp = 0.0;  // Kahan
    std::size_t seg = 0;
    for (std::size_t s = 0; s < strips; ++s) {
        const double x = (static_cast<double>(s) + 0.5) * h;
        while (seg + 1 < pts.size() - 1 && pts[seg + 1].first < x) ++seg;
        // Segment [seg, seg+1] contains x; vertical runs have zero width and are skipped by the loop.
        const auto [x0, y0] = pts[seg];
        const auto [x1, y1] = pts[seg + 1];
        const double y = x1 > x0 ? y0 + (y1 - y0) * (x - x0) / (x1 - x0) : y1;
        const double term = y * h - comp;
        const double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return sum / 10000.0;
}

inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("smotekit-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace smotekit::support
