#pragma once

#include "wpf/article.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wpf {

class CorpusFormatError : public std::runtime_error {
public:
    CorpusFormatError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Articles keyed by (site_id, post_id), iterated in ascending key order.
class Corpus {
public:
    Corpus() = default;
    /// Throws std::invalid_argument on duplicate keys or duplicate URLs.
    explicit Corpus(std::vector<Article> articles);

    const std::vector<Article>& articles() const { return articles_; }
    std::size_t size() const { return articles_.size(); }
    bool empty() const { return articles_.empty(); }
    auto begin() const { return articles_.begin(); }
    auto end() const { return articles_.end(); }

    const Article* find(const ArticleKey& key) const;
    const Article* find_url(std::string_view url) const;
    std::vector<std::string> sites() const;

    bool operator==(const Corpus& other) const { return articles_ == other.articles_; }

private:
    std::vector<Article> articles_;
    std::map<std::string, std::size_t, std::less<>> by_url_;
};

/// One corpus record. `indent` < 0 gives the single-line JSONL form.
std::string article_to_json(const Article& article, int indent = -1);
Article article_from_json(std::string_view json);

Corpus read_corpus(std::istream& is);
void write_corpus(std::ostream& os, const Corpus& corpus);
Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// ---------------------------------------------------------------- segmentation

struct Sentence {
    ArticleKey article;
    int ordinal = 0;
    std::string text;
    int token_count = 0;

    std::string id() const;  // "site/post/ordinal"
};

/// Rule-based splitter: sentence-final punctuation (. ! ? … 。！？) followed by
/// whitespace, with newline as a hard delimiter and an abbreviation guard.
/// Returned sentences carry ordinals and raw token counts but no article key.
std::vector<Sentence> split_sentences(std::string_view text);
std::vector<Sentence> article_sentences(const Article& article);

enum class TokenMode {
    Raw,       // Unicode word segmentation, case kept, punctuation kept
    Analysis,  // lowercased, punctuation and stopwords dropped
};

std::vector<std::string> tokenize(std::string_view text, TokenMode mode);

/// Raw tokens lowercased, punctuation-only tokens removed. Used for
/// dictionary scoring where only words count.
std::vector<std::string> word_tokens(std::string_view text);

bool is_stopword(std::string_view lowered);
const std::vector<std::string>& stopwords();
/// sha256 of the bundled stopword data file.
std::string_view stopword_list_checksum();

// ---------------------------------------------------------------- duplicates

struct DuplicatePair {
    ArticleKey first;
    ArticleKey second;
    bool operator==(const DuplicatePair&) const = default;
};

/// NFC, typographic quotes to ASCII, whitespace trimmed and collapsed.
std::string normalize_for_duplicates(std::string_view text);

/// Pairs of articles from different sites with equal normalized text.
/// Articles with empty text never pair. Each pair has first < second.
std::vector<DuplicatePair> find_cross_site_duplicates(const Corpus& corpus);

// ---------------------------------------------------------------- cyrillic

enum class CyrillicSuggestion { Accidental, ForgottenOrIntentional };
enum class CyrillicCategory { Accidental, Forgotten, Intentional, Unclear, Unannotated };

std::string_view to_string(CyrillicSuggestion s);
std::string_view to_string(CyrillicCategory c);
CyrillicCategory parse_cyrillic_category(std::string_view s);

/// A run of Cyrillic text in an article. Offsets are code point indices into
/// Article::text, half-open. Runs separated only by non-letters are merged,
/// so a span starts and ends on a Cyrillic character and every letter in it
/// is Cyrillic.
struct CyrillicFinding {
    ArticleKey article;
    std::size_t start = 0;
    std::size_t end = 0;
    std::string matched;
    std::string context;
    CyrillicSuggestion suggested = CyrillicSuggestion::ForgottenOrIntentional;
    CyrillicCategory final_category = CyrillicCategory::Unannotated;
};

std::vector<CyrillicFinding> detect_cyrillic(const Article& article);

struct CyrillicAnnotation {
    ArticleKey article;
    std::size_t start = 0;
    std::size_t end = 0;
    CyrillicCategory category = CyrillicCategory::Unannotated;
};

/// Reads `site_id,post_id,start,end,category` rows (header optional).
std::vector<CyrillicAnnotation> read_cyrillic_annotations(std::istream& is);

/// Sets final_category on findings whose (article, start, end) is annotated.
/// Returns the number of annotations that matched no finding.
std::size_t apply_annotations(std::vector<CyrillicFinding>& findings,
                              const std::vector<CyrillicAnnotation>& annotations);

}  // namespace wpf
