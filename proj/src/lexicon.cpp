#include "wpf/lexicon.hpp"

#include "wpf/text.hpp"

#include <unicode/uchar.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wpf {

// ---------------------------------------------------------------- loading

void CategoryLexicon::validate() const {
    std::set<std::string> has_children;
    for (const auto& [child, par] : parent) has_children.insert(par);
    for (const auto& c : categories) {
        auto it = patterns.find(c);
        bool empty = it == patterns.end() || it->second.empty();
        if (empty && !has_children.contains(c)) throw std::invalid_argument("category '" + c + "' is empty");
        if (it == patterns.end()) continue;
        for (const auto& p : it->second) {
            if (p.empty() || p == "*") throw std::invalid_argument("empty pattern in '" + c + "'");
            auto star = p.find('*');
            if (star != std::string::npos && star != p.size() - 1) {
                throw std::invalid_argument("'*' must be the last character in pattern '" + p + "'");
            }
        }
    }
    for (const auto& [child, par] : parent) {
        if (std::find(categories.begin(), categories.end(), par) == categories.end()) {
            throw std::invalid_argument("unknown parent category '" + par + "'");
        }
    }
}

namespace {

void add_category(CategoryLexicon& lex, const std::string& cat, std::size_t line) {
    if (cat.empty()) throw LexiconFormatError(line, "empty category name");
    if (std::find(lex.categories.begin(), lex.categories.end(), cat) != lex.categories.end()) {
        throw LexiconFormatError(line, "category '" + cat + "' declared twice");
    }
    lex.categories.push_back(cat);
    lex.patterns[cat];
}

void finish(CategoryLexicon& lex) {
    for (auto& [c, ps] : lex.patterns) {
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    }
    try {
        lex.validate();
    } catch (const std::invalid_argument& e) {
        throw LexiconFormatError(0, e.what());
    }
}

void check_pattern(const std::string& p, std::size_t line) {
    auto star = p.find('*');
    if (p == "*" || (star != std::string::npos && star != p.size() - 1)) {
        throw LexiconFormatError(line, "'*' must end a non-empty pattern: '" + p + "'");
    }
}

}  // namespace

CategoryLexicon read_sectioned_lexicon(std::istream& is, const std::string& name) {
    CategoryLexicon lex;
    lex.name = name;
    std::string current;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(is, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string s(text::trim(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw LexiconFormatError(line, "unterminated section header");
            std::string inner(text::trim(std::string_view(s).substr(1, s.size() - 2)));
            std::string par;
            if (auto colon = inner.find(':'); colon != std::string::npos) {
                par = std::string(text::trim(std::string_view(inner).substr(colon + 1)));
                inner = std::string(text::trim(std::string_view(inner).substr(0, colon)));
                if (par.empty()) throw LexiconFormatError(line, "empty parent name");
            }
            add_category(lex, inner, line);
            if (!par.empty()) lex.parent[inner] = par;
            current = inner;
            continue;
        }
        if (current.empty()) throw LexiconFormatError(line, "pattern before any [category] header");
        std::string p = text::to_lower(s);
        if (p.find_first_of(" \t") != std::string::npos) throw LexiconFormatError(line, "pattern contains whitespace");
        check_pattern(p, line);
        lex.patterns[current].push_back(p);
    }
    finish(lex);
    return lex;
}

CategoryLexicon read_dic_lexicon(std::istream& is, const std::string& name) {
    CategoryLexicon lex;
    lex.name = name;
    std::map<std::string, std::string> by_number;
    std::string raw;
    std::size_t line = 0;
    int section = 0;  // 0 before header, 1 inside, 2 after
    while (std::getline(is, raw)) {
        ++line;
        std::string s(text::trim(raw));
        if (s.empty()) continue;
        if (s == "%") {
            if (section == 2) throw LexiconFormatError(line, "unexpected '%'");
            ++section;
            continue;
        }
        std::vector<std::string> fields;
        {
            std::istringstream fs(s);
            for (std::string f; fs >> f;) fields.push_back(f);
        }
        if (section == 0) throw LexiconFormatError(line, "dictionary must start with '%'");
        if (section == 1) {
            if (fields.size() != 2) throw LexiconFormatError(line, "expected '<number> <category>'");
            if (by_number.contains(fields[0])) throw LexiconFormatError(line, "category number repeated");
            by_number[fields[0]] = fields[1];
            add_category(lex, fields[1], line);
            continue;
        }
        if (fields.size() < 2) throw LexiconFormatError(line, "entry without categories");
        std::string p = text::to_lower(fields[0]);
        check_pattern(p, line);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            auto it = by_number.find(fields[i]);
            if (it == by_number.end()) throw LexiconFormatError(line, "unknown category reference '" + fields[i] + "'");
            lex.patterns[it->second].push_back(p);
        }
    }
    if (section < 2) throw LexiconFormatError(line, "missing '%' header delimiters");
    // categories listed in the header but never used are dropped
    std::vector<std::string> used;
    for (const auto& c : lex.categories) {
        if (!lex.patterns[c].empty()) used.push_back(c);
        else lex.patterns.erase(c);
    }
    lex.categories = used;
    finish(lex);
    return lex;
}

CategoryLexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open lexicon " + path.string());
    std::string first;
    std::streampos start = is.tellg();
    for (std::string raw; std::getline(is, raw);) {
        std::string s(text::trim(raw));
        if (!s.empty() && s.front() != '#') {
            first = s;
            break;
        }
    }
    is.clear();
    is.seekg(start);
    auto name = path.stem().string();
    return first == "%" ? read_dic_lexicon(is, name) : read_sectioned_lexicon(is, name);
}

// ---------------------------------------------------------------- trie

struct CompiledLexicon::Impl {
    struct Node {
        std::map<unsigned char, std::size_t> next;
        std::vector<std::size_t> exact;
        std::vector<std::size_t> prefix;
    };
    std::vector<std::string> categories;
    std::vector<Node> nodes{1};

    std::size_t walk_or_add(std::string_view key) {
        std::size_t v = 0;
        for (char ch : key) {
            auto c = static_cast<unsigned char>(ch);
            auto it = nodes[v].next.find(c);
            if (it == nodes[v].next.end()) {
                nodes.emplace_back();
                nodes[v].next[c] = nodes.size() - 1;
                v = nodes.size() - 1;
            } else {
                v = it->second;
            }
        }
        return v;
    }
};

CompiledLexicon::CompiledLexicon(const CategoryLexicon& lexicon) : impl_(std::make_unique<Impl>()) {
    lexicon.validate();
    impl_->categories = lexicon.categories;
    for (std::size_t ci = 0; ci < lexicon.categories.size(); ++ci) {
        // own patterns plus those of every descendant
        std::set<std::string> members{lexicon.categories[ci]};
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& [child, par] : lexicon.parent) {
                if (members.contains(par) && members.insert(child).second) grew = true;
            }
        }
        for (const auto& m : members) {
            auto it = lexicon.patterns.find(m);
            if (it == lexicon.patterns.end()) continue;
            for (const auto& p : it->second) {
                bool is_prefix = p.back() == '*';
                auto node = impl_->walk_or_add(is_prefix ? std::string_view(p).substr(0, p.size() - 1) : p);
                auto& list = is_prefix ? impl_->nodes[node].prefix : impl_->nodes[node].exact;
                if (std::find(list.begin(), list.end(), ci) == list.end()) list.push_back(ci);
            }
        }
    }
}

CompiledLexicon::~CompiledLexicon() = default;
CompiledLexicon::CompiledLexicon(CompiledLexicon&&) noexcept = default;
CompiledLexicon& CompiledLexicon::operator=(CompiledLexicon&&) noexcept = default;

const std::vector<std::string>& CompiledLexicon::categories() const { return impl_->categories; }

std::vector<std::size_t> CompiledLexicon::match(std::string_view token) const {
    std::vector<std::size_t> out;
    std::size_t v = 0;
    auto take = [&](const std::vector<std::size_t>& ids) { out.insert(out.end(), ids.begin(), ids.end()); };
    take(impl_->nodes[v].prefix);
    bool complete = true;
    for (char ch : token) {
        auto it = impl_->nodes[v].next.find(static_cast<unsigned char>(ch));
        if (it == impl_->nodes[v].next.end()) {
            complete = false;
            break;
        }
        v = it->second;
        take(impl_->nodes[v].prefix);
    }
    if (complete) take(impl_->nodes[v].exact);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------- scoring

std::optional<CategoryScores> score_document(const std::vector<std::string>& tokens, const CompiledLexicon& lexicon) {
    if (tokens.empty()) return std::nullopt;
    std::vector<std::size_t> hits(lexicon.categories().size(), 0);
    for (const auto& t : tokens) {
        for (std::size_t c : lexicon.match(t)) ++hits[c];
    }
    CategoryScores out;
    for (std::size_t c = 0; c < hits.size(); ++c) {
        out[lexicon.categories()[c]] = 100.0 * static_cast<double>(hits[c]) / static_cast<double>(tokens.size());
    }
    return out;
}

std::optional<CategoryScores> punctuation_scores(std::string_view s) {
    auto words = word_tokens(s);
    if (words.empty()) return std::nullopt;
    static const std::array<const char*, 12> names = {"AllPunc", "Period", "Comma", "Colon",   "SemiC",   "QMark",
                                                      "Exclam",  "Dash",   "Quote", "Apostro", "Parenth", "OtherP"};
    std::map<std::string, double> counts;
    for (const char* n : names) counts[n] = 0.0;
    for (const auto& cp : text::decode_utf8(s)) {
        char32_t c = cp.value;
        const char* cat = nullptr;
        switch (c) {
            case U'.': cat = "Period"; break;
            case U',': cat = "Comma"; break;
            case U':': cat = "Colon"; break;
            case U';': cat = "SemiC"; break;
            case U'?': cat = "QMark"; break;
            case U'!': cat = "Exclam"; break;
            case U'-': case U'\u2013': case U'\u2014': cat = "Dash"; break;
            case U'"': case U'“': case U'”': case U'„': case U'«': case U'»': cat = "Quote"; break;
            case U'\'': case U'’': case U'‘': cat = "Apostro"; break;
            case U'(': case U')': case U'[': case U']': case U'{': case U'}': cat = "Parenth"; break;
            default:
                if (u_ispunct(static_cast<UChar32>(c))) cat = "OtherP";
        }
        if (!cat) continue;
        counts[cat] += 1.0;
        counts["AllPunc"] += 1.0;
    }
    const double per = 100.0 / static_cast<double>(words.size());
    for (auto& [k, v] : counts) v *= per;
    return counts;
}

const std::vector<std::string>& unavailable_summary_variables() {
    static const std::vector<std::string> names = {"Analytic", "Clout", "Authentic", "Tone"};
    return names;
}

std::map<std::string, CategoryScores> group_means(const std::vector<DocumentScores>& docs) {
    std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> acc;
    for (const auto& d : docs) {
        if (!d.scores) continue;
        for (const auto& [cat, v] : *d.scores) {
            for (const std::string& g : {d.group, std::string("All")}) {
                auto& [sum, n] = acc[g][cat];
                sum += v;
                ++n;
            }
        }
    }
    std::map<std::string, CategoryScores> out;
    for (const auto& [g, cats] : acc) {
        for (const auto& [cat, sn] : cats) out[g][cat] = sn.first / static_cast<double>(sn.second);
    }
    return out;
}

std::map<std::string, double> site_correlation(const std::vector<DocumentScores>& docs, const std::string& group) {
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (const auto& d : docs) {
        if (!d.scores) continue;
        double x = d.group == group ? 1.0 : 0.0;
        for (const auto& [cat, v] : *d.scores) series[cat].emplace_back(x, v);
    }
    std::map<std::string, double> out;
    for (const auto& [cat, xy] : series) {
        const double n = static_cast<double>(xy.size());
        double mx = 0.0, my = 0.0;
        for (const auto& [x, y] : xy) {
            mx += x;
            my += y;
        }
        mx /= n;
        my /= n;
        double sxy = 0.0, sxx = 0.0, syy = 0.0;
        for (const auto& [x, y] : xy) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
            syy += (y - my) * (y - my);
        }
        if (sxx <= 0.0 || syy <= 0.0) continue;
        out[cat] = sxy / std::sqrt(sxx * syy);
    }
    return out;
}

std::vector<std::pair<std::string, double>> top_correlated(const std::map<std::string, double>& r, std::size_t k) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [cat, v] : r) {
        if (v > 0.0) out.emplace_back(cat, v);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (out.size() > k) out.resize(k);
    return out;
}

}  // namespace wpf
