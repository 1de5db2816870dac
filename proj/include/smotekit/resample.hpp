#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "smotekit/data.hpp"
#include "smotekit/neighbors.hpp"
#include "smotekit/rng.hpp"

namespace smotekit {

enum class Variant : std::uint8_t { smote, smote_nc, smote_n, replicate };

/// per_attribute draws a fresh gap for every interpolated attribute; shared
/// draws one gap per synthetic row, keeping it on the base-neighbor segment.
enum class GapMode : std::uint8_t { per_attribute, shared };

/// with_replacement picks each synthetic row's neighbor independently;
/// distinct cycles through a shuffled neighbor list before repeating.
enum class NeighborMode : std::uint8_t { with_replacement, distinct };

/// Which minority count the under-sampling percentage is measured against
/// when over-sampling is also active.
enum class UnderBasis : std::uint8_t { pre_smote, post_smote };

std::string_view to_string(Variant v);
std::string_view to_string(GapMode m);
std::string_view to_string(NeighborMode m);
std::string_view to_string(UnderBasis b);
Variant parse_variant(std::string_view s);
GapMode parse_gap_mode(std::string_view s);
NeighborMode parse_neighbor_mode(std::string_view s);
UnderBasis parse_under_basis(std::string_view s);

/// Variant matching a schema: smote (all continuous), smote_n (all nominal),
/// smote_nc otherwise.
Variant variant_for(const FeatureSchema& schema);

struct SmoteParams {
    unsigned n_percent = 100;
    std::size_t k = 5;
    std::uint64_t seed = 0;
    GapMode gap_mode = GapMode::per_attribute;
    NeighborMode neighbor_mode = NeighborMode::with_replacement;
};

/// Where a synthetic row came from. Indices refer to the minority list the
/// generator was given, or to dataset rows once apply_plan has remapped them.
/// `gaps` holds one entry in shared mode and one per continuous attribute in
/// per-attribute mode; it is empty for the vote-only variant.
struct Provenance {
    std::size_t base_index = 0;
    std::optional<std::size_t> neighbor_index;
    std::vector<double> gaps;

    bool operator==(const Provenance&) const = default;
};

struct SyntheticBatch {
    std::vector<FeatureVector> rows;
    std::vector<Provenance> provenance;

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
    bool operator==(const SyntheticBatch&) const = default;
};

/// Number of bases and synthetic rows per base for N% over T samples.
/// N < 100 uses floor(N*T/100) distinct bases once each; otherwise every
/// sample is a base floor(N/100) times.
struct SmoteCounts {
    std::size_t bases = 0;
    std::size_t per_base = 0;
    std::size_t total() const { return bases * per_base; }
};
SmoteCounts smote_counts(unsigned n_percent, std::size_t t);

/// Continuous SMOTE. `neighbors` must have been computed over `minority`.
SyntheticBatch smote(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                     const SmoteParams& params, const NeighborList& neighbors, RandomSource& rng);
SyntheticBatch smote(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                     const SmoteParams& params, const NeighborList& neighbors);

/// Mixed continuous/nominal SMOTE. Continuous attributes interpolate as in
/// smote(); each nominal attribute takes the majority value among the base's
/// neighbors (the base itself does not vote).
SyntheticBatch smote_nc(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                        const SmoteParams& params, const NeighborList& neighbors, RandomSource& rng);
SyntheticBatch smote_nc(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                        const SmoteParams& params, const NeighborList& neighbors);

/// All-nominal SMOTE: every attribute is the majority vote over the base and
/// its neighbors. Only base selection (N < 100) consumes randomness.
SyntheticBatch smote_n(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                       const SmoteParams& params, const NeighborList& neighbors, RandomSource& rng);
SyntheticBatch smote_n(const std::vector<FeatureVector>& minority, const FeatureSchema& schema,
                       const SmoteParams& params, const NeighborList& neighbors);

/// Over-sampling by replication: the SMOTE row count, drawn uniformly with
/// replacement from `minority`.
SyntheticBatch replicate_oversample(const std::vector<FeatureVector>& minority, unsigned n_percent,
                                    RandomSource& rng);
SyntheticBatch replicate_oversample(const std::vector<FeatureVector>& minority, unsigned n_percent,
                                    std::uint64_t seed);

/// Majority vote over category codes. Ties go to `preferred` when it is among
/// the leaders, otherwise to the lowest (earliest interned) code.
std::size_t nominal_vote(std::span<const std::size_t> codes, std::optional<std::size_t> preferred);

struct UnderSamplePlan {
    unsigned percent = 100;
    std::uint64_t seed = 0;
};

/// round(100 * minority / percent), capped at `majority`.
std::size_t majority_target(std::size_t minority, unsigned percent, std::size_t majority);

/// Uniform subset without replacement of `majority_indices`, returned in
/// ascending order.
std::vector<std::size_t> under_sample(std::span<const std::size_t> majority_indices, std::size_t minority_count,
                                      const UnderSamplePlan& plan);

struct PlanOptions {
    unsigned over_percent = 0;
    unsigned under_percent = 0;  // 0 disables under-sampling
    std::size_t k = 5;
    std::uint64_t seed = 0;
    Variant variant = Variant::smote;
    GapMode gap_mode = GapMode::per_attribute;
    NeighborMode neighbor_mode = NeighborMode::with_replacement;
    UnderBasis under_basis = UnderBasis::pre_smote;
    bool shuffle = false;
    int vdm_k_exp = 1;
    int vdm_r = 1;
};

/// Where an output row of apply_plan came from: a row of the input set, or an
/// entry of the synthetic batch.
struct RowOrigin {
    bool synthetic = false;
    std::size_t index = 0;

    bool operator==(const RowOrigin&) const = default;
};

struct AugmentedDataset {
    Dataset data;
    /// Provenance indices refer to rows of the input training set.
    SyntheticBatch batch;
    /// One entry per output row.
    std::vector<RowOrigin> origin;
    std::size_t retained_majority = 0;
};

/// Over-samples the minority of `train`, then under-samples its majority.
/// Output order: original minority, synthetics, retained majority, unless
/// `shuffle` is set. Randomness comes from the "over", "under" and "shuffle"
/// substreams of `seed`.
AugmentedDataset apply_plan(const Dataset& train, const PlanOptions& options);

}  // namespace smotekit
