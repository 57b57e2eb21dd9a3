#include "cli.hpp"
#include "wpf/backdate.hpp"
#include "wpf/corpus.hpp"
#include "wpf/embeddings.hpp"
#include "wpf/hdbscan.hpp"
#include "wpf/lexicon.hpp"
#include "wpf/ngrams.hpp"
#include "wpf/reduce.hpp"
#include "wpf/report.hpp"
#include "wpf/time.hpp"
#include "wpf/topics.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace wpf;

namespace {

Matrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data.begin());
    return m;
}

py::array_t<double> to_array(const Matrix& m) {
    py::array_t<double> a({m.rows, m.cols});
    std::copy(m.data.begin(), m.data.end(), a.mutable_data());
    return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "WordPress news-site forensics toolkit";

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the wpf command line; returns (exit_code, stdout, stderr).");

    m.def(
        "to_moscow",
        [](const std::string& utc) { return format_moscow(to_moscow(parse_timestamp(utc))); },
        py::arg("utc"), "UTC timestamp string to Moscow wall-clock ISO string.");

    m.def(
        "load_corpus",
        [](const std::filesystem::path& path) {
            std::vector<std::string> out;
            for (const auto& a : load_corpus(path)) out.push_back(article_to_json(a));
            return out;
        },
        py::arg("path"), "Corpus records as JSON strings, in key order.");

    m.def(
        "monthly_counts",
        [](const std::filesystem::path& path, bool exclude_partial) {
            std::vector<std::tuple<std::string, std::string, std::string, std::size_t>> rows;
            for (const auto& c : monthly_counts(load_corpus(path), exclude_partial)) {
                rows.emplace_back(c.site_id, c.language, c.month.str(), c.count);
            }
            return rows;
        },
        py::arg("path"), py::arg("exclude_partial_months") = false);

    m.def(
        "weekend_share",
        [](const std::filesystem::path& path, const std::string& site) -> py::object {
            auto w = weekend_share(load_corpus(path), site);
            if (!w) return py::none();
            return py::make_tuple(w->posts, w->publication, w->modification);
        },
        py::arg("path"), py::arg("site") = "");

    m.def(
        "detect_backdated",
        [](const std::vector<std::pair<PostId, std::string>>& posts) {
            std::vector<PostDate> in;
            for (const auto& [id, date] : posts) in.push_back({id, parse_timestamp(date)});
            std::vector<std::tuple<PostId, std::optional<std::string>, std::optional<std::int64_t>>> out;
            for (const auto& f : detect_backdated(in)) {
                std::optional<std::string> est;
                if (f.estimated_true_date) est = format_utc(*f.estimated_true_date);
                out.emplace_back(f.post_id, est, f.magnitude_days);
            }
            return out;
        },
        py::arg("posts"), "(id, date_gmt) pairs to (id, estimated_date, magnitude_days) flags.");

    m.def("split_sentences", [](const std::string& text) {
        std::vector<std::pair<std::string, int>> out;
        for (const auto& s : split_sentences(text)) out.emplace_back(s.text, s.token_count);
        return out;
    });

    m.def(
        "tokenize",
        [](const std::string& text, bool analysis) {
            return tokenize(text, analysis ? TokenMode::Analysis : TokenMode::Raw);
        },
        py::arg("text"), py::arg("analysis") = false);

    m.def(
        "top_ngrams",
        [](const std::vector<std::vector<std::string>>& docs, std::size_t k) {
            std::vector<std::tuple<std::size_t, std::string, std::int64_t>> out;
            for (const auto& r : select_top(count_ngrams(docs), k)) out.emplace_back(r.rank, join_ngram(r.ngram), r.count);
            return out;
        },
        py::arg("docs"), py::arg("k") = 10);

    m.def(
        "hdbscan",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, std::size_t min_cluster_size,
           std::size_t min_samples) {
            return hdbscan(to_matrix(data), {min_cluster_size, min_samples}).labels;
        },
        py::arg("data"), py::arg("min_cluster_size") = 25, py::arg("min_samples") = 0);

    m.def(
        "pca",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& data, std::size_t target_dim) {
            return to_array(fit_pca(to_matrix(data), target_dim).projected);
        },
        py::arg("data"), py::arg("target_dim") = 5);

    m.def("ctfidf", [](const std::map<int, std::vector<std::string>>& class_terms) {
        return ctfidf(class_terms).keywords;
    });

    m.def(
        "load_embeddings",
        [](const std::filesystem::path& stem) {
            auto e = load_embeddings(stem);
            py::array_t<float> a({e.count(), e.dim});
            std::copy(e.values.begin(), e.values.end(), a.mutable_data());
            return py::make_tuple(e.ids, a);
        },
        py::arg("stem"), "Reads X.json + X.bin; returns (ids, float32 matrix).");

    m.def(
        "save_embeddings",
        [](const std::filesystem::path& stem, const std::vector<std::string>& ids,
           const py::array_t<float, py::array::c_style | py::array::forcecast>& values, bool l2_normalized) {
            if (values.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
            EmbeddingMatrix e;
            e.ids = ids;
            e.dim = static_cast<std::size_t>(values.shape(1));
            e.values.assign(values.data(), values.data() + values.size());
            e.l2_normalized = l2_normalized;
            save_embeddings(e, stem);
        },
        py::arg("stem"), py::arg("ids"), py::arg("values"), py::arg("l2_normalized") = true);

    m.def(
        "lexicon_scores",
        [](const std::filesystem::path& lexicon, const std::string& text) {
            CompiledLexicon compiled(load_lexicon(lexicon));
            return score_document(word_tokens(text), compiled);
        },
        py::arg("lexicon"), py::arg("text"));
}
