#pragma once

#include "wpf/corpus.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpf {

class LexiconFormatError : public std::runtime_error {
public:
    LexiconFormatError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Word categories made of literal words and prefix patterns ending in '*'.
/// A parent category also matches every word of its descendants.
struct CategoryLexicon {
    std::string name;
    std::vector<std::string> categories;                       // declaration order
    std::map<std::string, std::vector<std::string>> patterns;  // lowercase
    std::map<std::string, std::string> parent;                 // child -> parent

    /// Throws std::invalid_argument on a non-terminal '*', an empty pattern,
    /// or a category with neither patterns nor children.
    void validate() const;
};

/// Sectioned text format:
///   # comment
///   [category]            or  [category : parent]
///   word
///   prefix*
/// Patterns are lowercased. Throws LexiconFormatError.
CategoryLexicon read_sectioned_lexicon(std::istream& is, const std::string& name = {});

/// Tab-separated dictionary layout: a '%'-delimited header of
/// "<number>\t<category>" lines, then "<pattern>\t<number>\t<number>..."
/// lines. Entries with unparseable category references raise
/// LexiconFormatError.
CategoryLexicon read_dic_lexicon(std::istream& is, const std::string& name = {});

/// Picks the layout from the first meaningful line ('%' means .dic).
CategoryLexicon load_lexicon(const std::filesystem::path& path);

/// Patterns compiled into a byte trie, shared read-only between threads.
class CompiledLexicon {
public:
    explicit CompiledLexicon(const CategoryLexicon& lexicon);
    ~CompiledLexicon();
    CompiledLexicon(CompiledLexicon&&) noexcept;
    CompiledLexicon& operator=(CompiledLexicon&&) noexcept;

    const std::vector<std::string>& categories() const;
    /// Indices into categories() matched by a lowercase token.
    std::vector<std::size_t> match(std::string_view token) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

using CategoryScores = std::map<std::string, double>;

/// percent(c) = 100 * (tokens matching c) / (number of tokens). Tokens are
/// expected lowercased (see word_tokens). Empty documents give nullopt.
std::optional<CategoryScores> score_document(const std::vector<std::string>& tokens, const CompiledLexicon& lexicon);

/// Punctuation marks per 100 words, counted directly from the text:
/// AllPunc, Period, Comma, Colon, SemiC, QMark, Exclam, Dash, Quote,
/// Apostro, Parenth, OtherP. nullopt when the text has no words.
std::optional<CategoryScores> punctuation_scores(std::string_view text);

/// Dictionary summary variables that need proprietary formulas; always
/// reported as unavailable.
const std::vector<std::string>& unavailable_summary_variables();

struct DocumentScores {
    ArticleKey key;
    std::string group;  // usually the site id
    std::optional<CategoryScores> scores;
};

/// Per-group arithmetic means over documents with defined scores, plus the
/// group "All" over every such document. Categories missing from a document
/// are not averaged for it.
std::map<std::string, CategoryScores> group_means(const std::vector<DocumentScores>& docs);

/// Point-biserial correlation between membership in `group` and each
/// category's percentage, over all documents with defined scores.
/// Categories with zero variance (or a constant indicator) are omitted.
std::map<std::string, double> site_correlation(const std::vector<DocumentScores>& docs, const std::string& group);

/// Up to k categories with the largest positive correlation, descending.
std::vector<std::pair<std::string, double>> top_correlated(const std::map<std::string, double>& r, std::size_t k = 5);

}  // namespace wpf
