#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpf {

/// Row-major dense matrix of doubles used by reduction and clustering.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    bool operator==(const Matrix&) const = default;
};

/// n x dim float32 matrix with one id per row, as exchanged with the
/// embedding sidecar.
struct EmbeddingMatrix {
    std::vector<std::string> ids;
    std::size_t dim = 0;
    std::vector<float> values;  // row-major, ids.size() * dim
    bool l2_normalized = false;
    std::optional<std::string> model_id;
    std::optional<std::string> revision;

    std::size_t count() const { return ids.size(); }
    std::span<const float> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
    Matrix to_matrix() const;
    bool operator==(const EmbeddingMatrix&) const = default;
};

class EmbeddingFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Header is JSON {count, dim, dtype: "f32le", l2_normalized, ids[]}; the
/// binary file holds count*dim little-endian float32 values, row-major.
/// Throws EmbeddingFormatError on size mismatch, non-finite values,
/// duplicate ids or rows that are not unit length when declared normalized.
EmbeddingMatrix load_embeddings(const std::filesystem::path& header, const std::filesystem::path& bin);
/// `stem` + ".json" / ".bin".
EmbeddingMatrix load_embeddings(const std::filesystem::path& stem);
void save_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& header, const std::filesystem::path& bin);
void save_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& stem);

/// Throws EmbeddingFormatError when the matrix breaks its invariants.
void validate(const EmbeddingMatrix& m);

}  // namespace wpf
