#include "smotekit/neighbors.hpp"

#include <algorithm>
#include <utility>

#include "smotekit/error.hpp"

namespace smotekit {

NeighborList knn_minority(const std::vector<FeatureVector>& rows, std::size_t k, const Metric& metric) {
    const std::size_t t = rows.size();
    if (t < 2) {
        throw DataError("k-NN needs at least two minority samples");
    }
    if (k == 0) {
        throw ConfigError("k must be at least 1");
    }
    const std::size_t len = std::min(k, t - 1);

    NeighborList out;
    out.indices.resize(t);
    out.distances.resize(t);
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(t - 1);
    for (std::size_t i = 0; i < t; ++i) {
        cand.clear();
        for (std::size_t j = 0; j < t; ++j) {
            if (j != i) cand.emplace_back(metric(rows[i], rows[j]), j);
        }
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(len), cand.end());
        out.indices[i].reserve(len);
        out.distances[i].reserve(len);
        for (std::size_t n = 0; n < len; ++n) {
            out.distances[i].push_back(cand[n].first);
            out.indices[i].push_back(cand[n].second);
        }
    }
    return out;
}

}  // namespace smotekit
