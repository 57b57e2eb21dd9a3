#include "wpf/ngrams.hpp"

#include "wpf/text.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wpf {

std::string join_ngram(const Ngram& g) {
    std::string out;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i) out.push_back(' ');
        out += g[i];
    }
    return out;
}

NgramCounts count_ngrams(const std::vector<std::vector<std::string>>& docs, std::size_t min_n, std::size_t max_n) {
    NgramCounts counts;
    for (const auto& doc : docs) {
        for (std::size_t n = min_n; n <= max_n; ++n) {
            if (n == 0 || doc.size() < n) continue;
            for (std::size_t i = 0; i + n <= doc.size(); ++i) {
                ++counts[Ngram(doc.begin() + static_cast<std::ptrdiff_t>(i),
                               doc.begin() + static_cast<std::ptrdiff_t>(i + n))];
            }
        }
    }
    return counts;
}

std::set<Ngram> default_ngram_exclusions() { return {{"armed", "forces"}}; }

std::vector<NgramRow> select_top(const NgramCounts& counts, std::size_t k, const std::set<Ngram>& exclusions) {
    NgramCounts kept;
    for (const auto& [g, c] : counts) {
        if (!exclusions.contains(g)) kept.emplace(g, c);
    }

    std::set<Ngram> subsumed;
    for (const auto& [h, c] : kept) {
        for (std::size_t len = 1; len < h.size(); ++len) {
            for (std::size_t i = 0; i + len <= h.size(); ++i) {
                Ngram g(h.begin() + static_cast<std::ptrdiff_t>(i), h.begin() + static_cast<std::ptrdiff_t>(i + len));
                auto it = kept.find(g);
                if (it != kept.end() && it->second == c) subsumed.insert(std::move(g));
            }
        }
    }

    std::vector<NgramRow> rows;
    for (const auto& [g, c] : kept) {
        if (!subsumed.contains(g)) rows.push_back({g, c, 0});
    }
    std::sort(rows.begin(), rows.end(), [](const NgramRow& a, const NgramRow& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.ngram < b.ngram;
    });
    if (k == 0) return {};
    if (rows.size() > k) {
        std::int64_t cutoff = rows[k - 1].count;
        std::size_t end = k;
        while (end < rows.size() && rows[end].count == cutoff) ++end;
        rows.resize(end);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
    return rows;
}

std::vector<std::vector<std::string>> ngram_documents(const Article& article) {
    std::vector<std::vector<std::string>> docs;
    for (const auto& s : split_sentences(article.text)) {
        auto tokens = tokenize(s.text, TokenMode::Analysis);
        if (!tokens.empty()) docs.push_back(std::move(tokens));
    }
    return docs;
}

std::vector<NgramTable> monthly_tables(const Corpus& corpus, const std::string& site_id, const std::string& language,
                                       std::size_t k, const std::set<Ngram>& exclusions) {
    std::map<YearMonth, std::vector<std::vector<std::string>>> docs_by_month;
    for (const auto& a : corpus) {
        if (a.site_id != site_id || a.language != language) continue;
        auto& docs = docs_by_month[year_month(a.date_msk)];
        for (auto& d : ngram_documents(a)) docs.push_back(std::move(d));
    }
    std::vector<NgramTable> tables;
    for (const auto& [month, docs] : docs_by_month) {
        tables.push_back({site_id, language, month, select_top(count_ngrams(docs), k, exclusions)});
    }
    return tables;
}

std::set<Ngram> read_ngram_exclusions(std::istream& is) {
    std::set<Ngram> out;
    std::string line;
    while (std::getline(is, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        Ngram g;
        for (std::string tok; ls >> tok;) g.push_back(text::to_lower(tok));
        if (!g.empty()) out.insert(std::move(g));
    }
    return out;
}

std::set<Ngram> load_ngram_exclusions(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open exclusion file " + path.string());
    return read_ngram_exclusions(is);
}

}  // namespace wpf
