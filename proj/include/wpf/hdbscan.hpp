#pragma once

#include "wpf/embeddings.hpp"

#include <cstddef>
#include <vector>

namespace wpf {

inline constexpr int kOutlier = -1;

struct HdbscanParams {
    std::size_t min_cluster_size = 25;
    /// 0 means "same as min_cluster_size".
    std::size_t min_samples = 0;
};

struct HdbscanResult {
    /// One label per input row: 0..cluster_count-1 or kOutlier. Clusters are
    /// numbered by their lowest member row.
    std::vector<int> labels;
    std::size_t cluster_count = 0;
    /// Excess-of-mass stability of each selected cluster, by label.
    std::vector<double> stabilities;
};

/// Density-based clustering over Euclidean distance:
/// core distance = distance to the min_samples-th nearest neighbour (the
/// point itself counts as the first), mutual reachability
/// max(core(a), core(b), d(a, b)), minimum spanning tree, single-linkage
/// hierarchy, condensation with min_cluster_size, and excess-of-mass
/// selection with lambda = 1 / distance. The root is only selected when the
/// condensed tree has no other cluster. Fewer rows than min_cluster_size
/// gives all outliers. Throws std::invalid_argument if min_cluster_size < 2.
HdbscanResult hdbscan(const Matrix& data, const HdbscanParams& params = {});

}  // namespace wpf
