#pragma once

#include "wpf/corpus.hpp"
#include "wpf/time.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace wpf {

using Ngram = std::vector<std::string>;
using NgramCounts = std::map<Ngram, std::int64_t>;

std::string join_ngram(const Ngram& g);  // tokens separated by one space

/// Counts every contiguous n-gram with min_n <= n <= max_n, summed over docs.
NgramCounts count_ngrams(const std::vector<std::vector<std::string>>& docs, std::size_t min_n = 2,
                         std::size_t max_n = 4);

struct NgramRow {
    Ngram ngram;
    std::int64_t count = 0;
    std::size_t rank = 0;  // 1-based position
    bool operator==(const NgramRow&) const = default;
};

std::set<Ngram> default_ngram_exclusions();

/// Drops excluded n-grams, then drops any n-gram that is a contiguous part of
/// a longer counted n-gram with the same count, orders by count descending
/// then lexicographically, and keeps the first k plus everything tied with
/// the k-th count.
std::vector<NgramRow> select_top(const NgramCounts& counts, std::size_t k = 10,
                                 const std::set<Ngram>& exclusions = default_ngram_exclusions());

struct NgramTable {
    std::string site_id;
    std::string language;
    YearMonth month;
    std::vector<NgramRow> rows;
};

/// Analysis-mode tokens of each sentence of the article; n-grams never span
/// sentence boundaries.
std::vector<std::vector<std::string>> ngram_documents(const Article& article);

/// One table per Moscow calendar month that has at least one matching article.
std::vector<NgramTable> monthly_tables(const Corpus& corpus, const std::string& site_id,
                                       const std::string& language, std::size_t k = 10,
                                       const std::set<Ngram>& exclusions = default_ngram_exclusions());

/// One n-gram per line, tokens separated by whitespace; '#' starts a comment.
/// Tokens are lowercased.
std::set<Ngram> read_ngram_exclusions(std::istream& is);
std::set<Ngram> load_ngram_exclusions(const std::filesystem::path& path);

}  // namespace wpf
