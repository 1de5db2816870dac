#pragma once

#include <cstddef>
#include <vector>

#include "smotekit/distance.hpp"

namespace smotekit {

/// Per-sample nearest-neighbor lists over one minority set.
///
/// Entry i lists min(k, T-1) indices j != i sorted by (distance, j).
struct NeighborList {
    std::vector<std::vector<std::size_t>> indices;
    std::vector<std::vector<double>> distances;

    std::size_t size() const { return indices.size(); }
    const std::vector<std::size_t>& of(std::size_t i) const { return indices.at(i); }
};

/// Exact brute-force k-NN among `rows` under `metric`.
/// Throws DataError when fewer than two rows are given.
NeighborList knn_minority(const std::vector<FeatureVector>& rows, std::size_t k, const Metric& metric);

}  // namespace smotekit
