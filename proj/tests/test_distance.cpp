#include <gtest/gtest.h>

#include <cmath>

#include "smotekit/distance.hpp"
#include "smotekit/error.hpp"
#include "test_support.hpp"

using namespace smotekit;

namespace {

// Three continuous features then three nominal ones.
FeatureSchema mixed_schema() {
    return FeatureSchema({{"c1", FeatureKind::continuous},
                          {"c2", FeatureKind::continuous},
                          {"c3", FeatureKind::continuous},
                          {"n1", FeatureKind::nominal},
                          {"n2", FeatureKind::nominal},
                          {"n3", FeatureKind::nominal}},
                         "class");
}

// Codes: A=0 B=1 C=2 D=3 E=4
const FeatureVector f1{1, 2, 3, 0, 1, 2};
const FeatureVector f2{4, 6, 5, 0, 3, 4};

}  // namespace

TEST(Euclidean, Examples) {
    auto s = support::continuous_schema(2);
    EXPECT_DOUBLE_EQ(euclidean(FeatureVector{6, 4}, FeatureVector{4, 3}, s), std::sqrt(5.0));
    EXPECT_EQ(euclidean(FeatureVector{6, 4}, FeatureVector{6, 4}, s), 0.0);
    EXPECT_EQ(euclidean(FeatureVector{0, 0}, FeatureVector{3, 4}, s), 5.0);
}

TEST(Euclidean, RejectsNominal) {
    EXPECT_THROW(euclidean(f1, f2, mixed_schema()), ConfigError);
}

TEST(NcDistance, WorkedMixedPair) {
    for (double m : {0.0, 1.0, 2.5}) {
        EXPECT_NEAR(nc_distance(f1, f2, mixed_schema(), {m}), std::sqrt(29 + 2 * m * m), 1e-12);
    }
    EXPECT_EQ(nc_distance(f1, f1, mixed_schema(), {1.0}), 0.0);
}

TEST(NcDistance, AllNominalCountsMismatches) {
    auto s = support::nominal_schema(4);
    EXPECT_NEAR(nc_distance(FeatureVector{0, 1, 2, 3}, FeatureVector{1, 2, 3, 3}, s, {2.0}), std::sqrt(12.0),
                1e-12);
}

TEST(NcDistance, MedZeroHidesNominalDifferences) {
    FeatureVector a{1, 2, 3, 0, 0, 0};
    FeatureVector b{1, 2, 3, 1, 2, 3};
    EXPECT_EQ(nc_distance(a, b, mixed_schema(), {0.0}), 0.0);
    EXPECT_GT(nc_distance(a, b, mixed_schema(), {0.1}), 0.0);
}

TEST(NcDistance, DegeneratesToEuclidean) {
    Rng rng(3);
    auto s = support::continuous_schema(5);
    for (int t = 0; t < 50; ++t) {
        FeatureVector a(5), b(5);
        for (auto& v : a) v = support::normal(rng);
        for (auto& v : b) v = support::normal(rng);
        EXPECT_EQ(nc_distance(a, b, s, {rng.unit() * 10}), euclidean(a, b, s));
    }
}

TEST(NcDistance, MetricProperties) {
    Rng rng(8);
    auto s = mixed_schema();
    auto draw = [&] {
        FeatureVector v(6);
        for (int i = 0; i < 3; ++i) v[i] = support::normal(rng);
        for (int i = 3; i < 6; ++i) v[i] = static_cast<double>(rng.below(3));
        return v;
    };
    for (int t = 0; t < 100; ++t) {
        auto a = draw(), b = draw();
        NcDistanceParams p{0.5 + rng.unit()};
        double d = nc_distance(a, b, s, p);
        EXPECT_GE(d, 0.0);
        EXPECT_EQ(d, nc_distance(b, a, s, p));
        EXPECT_EQ(nc_distance(a, a, s, p), 0.0);
        if (a != b) {
            EXPECT_GT(d, 0.0);
        }
    }
}

TEST(Med, Examples) {
    auto s1 = support::continuous_schema(1);
    // Identical rows.
    EXPECT_EQ(compute_med({{3}, {3}, {3}}, s1).med, 0.0);
    // Sample std of {0, 5} is 5/sqrt(2); of {-2.5, 0, 2.5} with n-1 is 2.5.
    EXPECT_NEAR(compute_med({{-2.5}, {0}, {2.5}}, s1).med, 2.5, 1e-12);
    EXPECT_EQ(compute_med({{7}}, s1).med, 0.0);
    // Four features with stds {1, 2, 3, 10}: columns {-s, 0, s} have sample std s.
    auto s4 = support::continuous_schema(4);
    std::vector<FeatureVector> rows{{-1, -2, -3, -10}, {0, 0, 0, 0}, {1, 2, 3, 10}};
    EXPECT_NEAR(compute_med(rows, s4).med, 2.5, 1e-12);
}

TEST(Med, IgnoresNominalColumns) {
    std::vector<FeatureVector> rows{{-1, -2, -3, 0, 0, 0}, {0, 0, 0, 5, 1, 1}, {1, 2, 3, 9, 2, 2}};
    EXPECT_NEAR(compute_med(rows, mixed_schema()).med, 2.0, 1e-12);
    EXPECT_THROW(compute_med({{0, 1}}, support::nominal_schema(2)), ConfigError);
}

namespace {

// One minority row with code 0 and one majority row with code 1 on every feature.
Dataset toy_table(std::size_t features) {
    return support::make_dataset(support::nominal_schema(features),
                                 {FeatureVector(features, 0.0), FeatureVector(features, 1.0)},
                                 {ClassLabel::minority, ClassLabel::majority});
}

// V1 (code 0) occurs three times, always minority; V2 (code 1) twice, always majority.
VdmTable toy_vdm(std::size_t features, int k_exp = 1, int r = 1) {
    std::vector<std::vector<VdmTable::ValueCounts>> counts(features);
    for (auto& f : counts) {
        f.resize(2);
        f[0] = {3, {0, 3}};
        f[1] = {2, {2, 0}};
    }
    return VdmTable(support::nominal_schema(features), counts, k_exp, r);
}

}  // namespace

TEST(Vdm, ToyTableDelta) {
    auto t = toy_vdm(1);
    EXPECT_EQ(vdm_delta(t, 0, 0, 1), 2.0);
    EXPECT_EQ(vdm_delta(t, 0, 1, 0), 2.0);
    EXPECT_EQ(vdm_delta(t, 0, 0, 0), 0.0);
}

TEST(Vdm, DistanceSumsDeltas) {
    auto t = toy_vdm(2);
    EXPECT_EQ(vdm_distance(t, FeatureVector{0, 0}, FeatureVector{1, 1}), 4.0);
    EXPECT_EQ(vdm_distance(t, FeatureVector{0, 1}, FeatureVector{0, 1}), 0.0);
    auto t2 = toy_vdm(2, 1, 2);
    EXPECT_EQ(vdm_distance(t2, FeatureVector{0, 0}, FeatureVector{1, 1}), 8.0);
}

TEST(Vdm, KExponent) {
    std::vector<std::vector<VdmTable::ValueCounts>> counts{{{4, {1, 3}}, {4, {3, 1}}}};
    VdmTable k1(support::nominal_schema(1), counts, 1, 1);
    VdmTable k2(support::nominal_schema(1), counts, 2, 1);
    EXPECT_DOUBLE_EQ(k1.delta(0, 0, 1), 1.0);
    EXPECT_DOUBLE_EQ(k2.delta(0, 0, 1), 0.5);
}

TEST(Vdm, BuildCountsBothClasses) {
    auto ds = toy_table(1);
    auto t = VdmTable::build(ds);
    EXPECT_EQ(t.counts(0, 0).total, 1u);
    EXPECT_EQ(t.counts(0, 0).per_class[static_cast<int>(ClassLabel::minority)], 1u);
    EXPECT_EQ(t.counts(0, 1).per_class[static_cast<int>(ClassLabel::majority)], 1u);
    EXPECT_EQ(vdm_delta(t, 0, 0, 1), 2.0);
}

TEST(Vdm, UnseenValueIsAnError) {
    auto t = toy_vdm(1);
    EXPECT_THROW(vdm_delta(t, 0, 0, 5), DataError);
}

TEST(Vdm, CountInvariants) {
    auto ds = support::make_dataset(support::nominal_schema(2),
                                    {{0, 0}, {1, 0}, {0, 1}, {2, 1}, {1, 1}},
                                    {ClassLabel::minority, ClassLabel::minority, ClassLabel::majority,
                                     ClassLabel::majority, ClassLabel::majority});
    auto t = VdmTable::build(ds);
    for (std::size_t f = 0; f < 2; ++f) {
        for (std::size_t v = 0; v < ds.categories().category_count(f); ++v) {
            const auto& c = t.counts(f, v);
            EXPECT_GE(c.total, 1u);
            EXPECT_EQ(c.per_class[0] + c.per_class[1], c.total);
        }
    }
}

TEST(Vdm, PseudometricOnRandomTables) {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t nf = 1 + rng.below(4);
        std::vector<std::vector<VdmTable::ValueCounts>> counts(nf);
        for (auto& f : counts) {
            std::size_t nv = 2 + rng.below(5);
            for (std::size_t v = 0; v < nv; ++v) {
                std::size_t a = rng.below(20), b = rng.below(20);
                if (a + b == 0) a = 1;
                f.push_back({a + b, {a, b}});
            }
        }
        VdmTable t(support::nominal_schema(nf), counts);
        auto draw = [&] {
            FeatureVector x(nf);
            for (std::size_t f = 0; f < nf; ++f) x[f] = static_cast<double>(rng.below(counts[f].size()));
            return x;
        };
        auto x = draw(), y = draw(), z = draw();
        EXPECT_EQ(vdm_distance(t, x, x), 0.0);
        EXPECT_EQ(vdm_distance(t, x, y), vdm_distance(t, y, x));
        EXPECT_LE(vdm_distance(t, x, z), vdm_distance(t, x, y) + vdm_distance(t, y, z) + 1e-12);
    }
}

TEST(Metrics, FactoriesMatchFreeFunctions) {
    auto s = mixed_schema();
    auto m = nc_metric(s, {1.5});
    EXPECT_EQ(m(f1, f2), nc_distance(f1, f2, s, {1.5}));
    auto e = euclidean_metric(support::continuous_schema(2));
    EXPECT_EQ(e(FeatureVector{0, 0}, FeatureVector{3, 4}), 5.0);
    auto t = toy_vdm(2);
    auto v = vdm_metric(t);
    EXPECT_EQ(v(FeatureVector{0, 0}, FeatureVector{1, 1}), 4.0);
}
