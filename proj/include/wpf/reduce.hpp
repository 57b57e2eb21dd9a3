#pragma once

#include "wpf/embeddings.hpp"

#include <memory>
#include <string>
#include <vector>

namespace wpf {

struct Reduction {
    Matrix projected;                // n x target_dim
    std::vector<std::string> warnings;
};

/// Pluggable dimensionality reduction. Implementations must be deterministic
/// for a given input.
class Reducer {
public:
    virtual ~Reducer() = default;
    virtual std::string name() const = 0;
    virtual Reduction reduce(const Matrix& data, std::size_t target_dim) const = 0;
};

/// Principal components of the centered data, computed in double precision.
struct PcaModel {
    std::vector<double> mean;          // dim
    Matrix components;                 // target_dim x dim, orthonormal rows
    std::vector<double> variances;     // eigenvalue of each component
    double total_variance = 0.0;       // trace of the covariance
    Matrix projected;                  // n x target_dim
    std::vector<std::string> warnings;

    /// mean + projected * components
    Matrix reconstruct(const Matrix& projected_rows) const;
};

/// Projects onto the top target_dim principal components. Each component's
/// sign is fixed so that its largest-magnitude loading is positive. When the
/// covariance has fewer than target_dim nonzero eigenvalues the remaining
/// output dimensions are zero and a warning is recorded.
/// Throws std::invalid_argument when target_dim is zero or exceeds dim.
PcaModel fit_pca(const Matrix& data, std::size_t target_dim);

class PcaReducer : public Reducer {
public:
    std::string name() const override { return "pca"; }
    Reduction reduce(const Matrix& data, std::size_t target_dim) const override;
};

/// Looks up a reducer by name ("pca"). Neighbour-graph methods are not
/// bundled; unknown names throw std::invalid_argument.
std::unique_ptr<Reducer> make_reducer(const std::string& name);

}  // namespace wpf
