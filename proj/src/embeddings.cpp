#include "wpf/embeddings.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

namespace wpf {

namespace {

constexpr double kNormTolerance = 1e-3;

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* suffix) {
    auto p = stem;
    p += suffix;
    return p;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw EmbeddingFormatError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::uint32_t to_little(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
    }
}

}  // namespace

Matrix EmbeddingMatrix::to_matrix() const {
    Matrix m(count(), dim);
    for (std::size_t i = 0; i < values.size(); ++i) m.data[i] = static_cast<double>(values[i]);
    return m;
}

void validate(const EmbeddingMatrix& m) {
    if (m.values.size() != m.ids.size() * m.dim) {
        throw EmbeddingFormatError("matrix has " + std::to_string(m.values.size()) + " values, expected " +
                                   std::to_string(m.ids.size() * m.dim));
    }
    std::set<std::string> seen;
    for (const auto& id : m.ids) {
        if (!seen.insert(id).second) throw EmbeddingFormatError("duplicate id " + id);
    }
    for (std::size_t i = 0; i < m.count(); ++i) {
        double norm2 = 0.0;
        for (float v : m.row(i)) {
            if (!std::isfinite(v)) throw EmbeddingFormatError("non-finite value in row " + std::to_string(i));
            norm2 += static_cast<double>(v) * static_cast<double>(v);
        }
        if (m.l2_normalized && std::abs(std::sqrt(norm2) - 1.0) > kNormTolerance) {
            throw EmbeddingFormatError("row " + std::to_string(i) + " is not unit length");
        }
    }
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& header, const std::filesystem::path& bin) {
    nlohmann::json h;
    try {
        h = nlohmann::json::parse(read_file(header));
    } catch (const nlohmann::json::exception& e) {
        throw EmbeddingFormatError(header.string() + ": " + e.what());
    }
    EmbeddingMatrix m;
    std::size_t count = 0;
    try {
        if (h.at("dtype").get<std::string>() != "f32le") throw EmbeddingFormatError("unsupported dtype");
        count = h.at("count").get<std::size_t>();
        m.dim = h.at("dim").get<std::size_t>();
        m.l2_normalized = h.at("l2_normalized").get<bool>();
        m.ids = h.at("ids").get<std::vector<std::string>>();
        if (h.contains("model_id")) m.model_id = h["model_id"].get<std::string>();
        if (h.contains("revision")) m.revision = h["revision"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw EmbeddingFormatError(header.string() + ": " + e.what());
    }
    if (m.ids.size() != count) {
        throw EmbeddingFormatError("header count " + std::to_string(count) + " but " + std::to_string(m.ids.size()) +
                                   " ids");
    }
    auto bytes = read_file(bin);
    if (bytes.size() != count * m.dim * 4) {
        throw EmbeddingFormatError(bin.string() + ": " + std::to_string(bytes.size()) + " bytes, expected " +
                                   std::to_string(count * m.dim * 4));
    }
    m.values.resize(count * m.dim);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        std::uint32_t raw = 0;
        std::memcpy(&raw, bytes.data() + 4 * i, 4);
        m.values[i] = std::bit_cast<float>(to_little(raw));
    }
    validate(m);
    return m;
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& stem) {
    return load_embeddings(with_suffix(stem, ".json"), with_suffix(stem, ".bin"));
}

void save_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& header, const std::filesystem::path& bin) {
    validate(m);
    nlohmann::ordered_json h;
    h["count"] = m.count();
    h["dim"] = m.dim;
    h["dtype"] = "f32le";
    h["l2_normalized"] = m.l2_normalized;
    if (m.model_id) h["model_id"] = *m.model_id;
    if (m.revision) h["revision"] = *m.revision;
    h["ids"] = m.ids;
    {
        std::ofstream os(header, std::ios::binary);
        os << h.dump(2) << '\n';
        if (!os) throw std::runtime_error("cannot write " + header.string());
    }
    std::string bytes(m.values.size() * 4, '\0');
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        std::uint32_t raw = to_little(std::bit_cast<std::uint32_t>(m.values[i]));
        std::memcpy(bytes.data() + 4 * i, &raw, 4);
    }
    std::ofstream os(bin, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("cannot write " + bin.string());
}

void save_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& stem) {
    save_embeddings(m, with_suffix(stem, ".json"), with_suffix(stem, ".bin"));
}

}  // namespace wpf
