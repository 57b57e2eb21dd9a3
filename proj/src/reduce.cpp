#include "wpf/reduce.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace wpf {

namespace {

// Eigenvalues below this fraction of the largest one are treated as zero.
constexpr double kRankTolerance = 1e-12;

}  // namespace

PcaModel fit_pca(const Matrix& data, std::size_t target_dim) {
    const std::size_t n = data.rows;
    const std::size_t d = data.cols;
    if (target_dim == 0 || target_dim > d) {
        throw std::invalid_argument("target dimension must be between 1 and " + std::to_string(d));
    }
    if (n == 0) throw std::invalid_argument("cannot reduce an empty matrix");

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
        data.data.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    Eigen::RowVectorXd mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - mean;
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    // ascending order from Eigen; take from the back
    const Eigen::VectorXd& values = solver.eigenvalues();
    const Eigen::MatrixXd& vectors = solver.eigenvectors();
    const double largest = std::max(values(values.size() - 1), 0.0);

    PcaModel model;
    model.mean.assign(mean.data(), mean.data() + d);
    model.components = Matrix(target_dim, d);
    model.variances.assign(target_dim, 0.0);
    model.total_variance = std::max(cov.trace(), 0.0);

    std::size_t rank = 0;
    for (std::size_t c = 0; c < target_dim; ++c) {
        Eigen::Index idx = static_cast<Eigen::Index>(d - 1 - c);
        double lambda = values(idx);
        if (largest <= 0.0 || lambda <= kRankTolerance * largest) break;
        Eigen::VectorXd v = vectors.col(idx);
        Eigen::Index arg = 0;
        for (Eigen::Index j = 1; j < v.size(); ++j) {
            if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
        }
        if (v(arg) < 0) v = -v;
        for (std::size_t j = 0; j < d; ++j) model.components(c, j) = v(static_cast<Eigen::Index>(j));
        model.variances[c] = lambda;
        ++rank;
    }
    if (rank < target_dim) {
        model.warnings.push_back("covariance rank " + std::to_string(rank) + " is below target dimension " +
                                 std::to_string(target_dim) + "; padding with zero dimensions");
    }

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> comp(
        model.components.data.data(), static_cast<Eigen::Index>(target_dim), static_cast<Eigen::Index>(d));
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> proj = centered * comp.transpose();
    model.projected = Matrix(n, target_dim);
    std::copy(proj.data(), proj.data() + proj.size(), model.projected.data.begin());
    return model;
}

Matrix PcaModel::reconstruct(const Matrix& projected_rows) const {
    Matrix out(projected_rows.rows, mean.size());
    for (std::size_t i = 0; i < out.rows; ++i) {
        for (std::size_t j = 0; j < out.cols; ++j) {
            double v = mean[j];
            for (std::size_t c = 0; c < components.rows; ++c) v += projected_rows(i, c) * components(c, j);
            out(i, j) = v;
        }
    }
    return out;
}

Reduction PcaReducer::reduce(const Matrix& data, std::size_t target_dim) const {
    auto model = fit_pca(data, target_dim);
    return {std::move(model.projected), std::move(model.warnings)};
}

std::unique_ptr<Reducer> make_reducer(const std::string& name) {
    if (name == "pca") return std::make_unique<PcaReducer>();
    throw std::invalid_argument("unknown reduction method '" + name + "'");
}

}  // namespace wpf
