#include <doctest.h>

#include "wpf/embeddings.hpp"
#include "wpf/reduce.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace wpf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / "wpf_test_reduce";
    fs::create_directories(dir);
    return dir / name;
}

EmbeddingMatrix small_matrix() {
    EmbeddingMatrix m;
    m.ids = {"a/1/0", "a/1/1"};
    m.dim = 3;
    m.values = {0.1f, -2.5f, 3.0e-8f, 1.0f, 0.0f, -0.0f};
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

}  // namespace

TEST_CASE("embedding interchange round trip is bit-identical") {
    auto m = small_matrix();
    m.model_id = "demo";
    save_embeddings(m, scratch("rt"));
    auto back = load_embeddings(scratch("rt"));
    CHECK(back == m);
    std::ifstream bin(scratch("rt.bin"), std::ios::binary | std::ios::ate);
    CHECK(bin.tellg() == 2 * 3 * 4);
}

TEST_CASE("embedding interchange errors") {
    auto m = small_matrix();
    save_embeddings(m, scratch("short"));
    fs::resize_file(scratch("short.bin"), 2 * 3 * 4 - 1);
    CHECK_THROWS_AS(load_embeddings(scratch("short")), EmbeddingFormatError);

    {
        std::ofstream h(scratch("count.json"));
        h << R"({"count": 3, "dim": 3, "dtype": "f32le", "l2_normalized": false, "ids": ["x", "y"]})";
        std::ofstream b(scratch("count.bin"), std::ios::binary);
        b << std::string(36, '\0');
    }
    CHECK_THROWS_AS(load_embeddings(scratch("count")), EmbeddingFormatError);

    auto dup = small_matrix();
    dup.ids = {"x", "x"};
    CHECK_THROWS_AS(validate(dup), EmbeddingFormatError);
    auto nonfinite = small_matrix();
    nonfinite.values[2] = std::nanf("");
    CHECK_THROWS_AS(validate(nonfinite), EmbeddingFormatError);
    auto unnormalized = small_matrix();
    unnormalized.l2_normalized = true;
    CHECK_THROWS_AS(validate(unnormalized), EmbeddingFormatError);
}

TEST_CASE("planted plane is recovered exactly") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g(0.0, 1.0);
    // orthonormal basis of a random plane in 10-D via Gram-Schmidt
    std::vector<double> u(10), v(10), offset(10);
    for (auto& x : u) x = g(rng);
    for (auto& x : v) x = g(rng);
    for (auto& x : offset) x = 5.0 * g(rng);
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    double nu = std::sqrt(dot(u, u));
    for (auto& x : u) x /= nu;
    double uv = dot(u, v);
    for (std::size_t i = 0; i < 10; ++i) v[i] -= uv * u[i];
    double nv = std::sqrt(dot(v, v));
    for (auto& x : v) x /= nv;

    Matrix data(20, 10);
    for (std::size_t i = 0; i < 20; ++i) {
        double a = 3.0 * g(rng), b = g(rng);
        for (std::size_t j = 0; j < 10; ++j) data(i, j) = offset[j] + a * u[j] + b * v[j];
    }
    auto model = fit_pca(data, 2);
    CHECK(model.warnings.empty());
    CHECK(max_abs_diff(model.reconstruct(model.projected), data) <= 1e-6);
    // components span the planted plane
    for (std::size_t c = 0; c < 2; ++c) {
        std::vector<double> comp(model.components.row(c).begin(), model.components.row(c).end());
        double in_plane = dot(comp, u) * dot(comp, u) + dot(comp, v) * dot(comp, v);
        CHECK(in_plane == doctest::Approx(1.0).epsilon(1e-9));
        // sign convention
        double big = 0.0;
        for (double x : comp) if (std::abs(x) > std::abs(big)) big = x;
        CHECK(big > 0.0);
    }
    auto again = fit_pca(data, 2);
    CHECK(again.projected == model.projected);
    CHECK(again.components == model.components);
}

TEST_CASE("isotropic data spreads variance evenly") {
    const std::size_t n = 20000, d = 20;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix data(n, d);
    for (auto& x : data.data) x = g(rng);
    auto model = fit_pca(data, 5);
    // eigenvalue ratios of a sample covariance lie within the
    // Marchenko-Pastur edges up to sampling noise
    const double gamma = static_cast<double>(d) / static_cast<double>(n);
    const double slack = 3.0 * std::sqrt(2.0 / static_cast<double>(n));
    const double lo = std::pow(1.0 - std::sqrt(gamma), 2) - slack;
    const double hi = std::pow(1.0 + std::sqrt(gamma), 2) + slack;
    for (double lambda : model.variances) {
        double share = lambda / model.total_variance;
        CHECK(share * static_cast<double>(d) >= lo);
        CHECK(share * static_cast<double>(d) <= hi);
    }
}

TEST_CASE("as many points as target dimensions fit exactly") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix data(5, 12);
    for (auto& x : data.data) x = g(rng);
    auto model = fit_pca(data, 5);
    // centered 5 points span 4 dimensions; the fifth output is padding
    REQUIRE(model.warnings.size() == 1);
    CHECK(max_abs_diff(model.reconstruct(model.projected), data) <= 1e-9);
    for (std::size_t i = 0; i < 5; ++i) CHECK(model.projected(i, 4) == 0.0);
}

TEST_CASE("reduction arguments are validated") {
    Matrix data(4, 3);
    CHECK_THROWS_AS(fit_pca(data, 0), std::invalid_argument);
    CHECK_THROWS_AS(fit_pca(data, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_reducer("umap"), std::invalid_argument);
    CHECK(make_reducer("pca")->name() == "pca");
}
