#include "wpf/corpus.hpp"

#include "stopwords_data.hpp"
#include "wpf/table.hpp"
#include "wpf/text.hpp"

#include <json.hpp>
#include <unicode/brkiter.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace wpf {

using ordered_json = nlohmann::ordered_json;

bool is_known_language(std::string_view code) {
    return std::find(kLanguages.begin(), kLanguages.end(), code) != kLanguages.end();
}

std::string ArticleKey::str() const { return site_id + "/" + std::to_string(post_id); }

std::string join_paragraphs(const std::vector<std::string>& paragraphs) {
    std::string out;
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        if (i) out.push_back('\n');
        out += paragraphs[i];
    }
    return out;
}

// ---------------------------------------------------------------- Corpus

Corpus::Corpus(std::vector<Article> articles) : articles_(std::move(articles)) {
    std::sort(articles_.begin(), articles_.end(),
              [](const Article& a, const Article& b) { return a.key() < b.key(); });
    for (std::size_t i = 0; i < articles_.size(); ++i) {
        if (i > 0 && articles_[i].key() == articles_[i - 1].key()) {
            throw std::invalid_argument("duplicate article key " + articles_[i].key().str());
        }
        if (!articles_[i].url.empty() && !by_url_.emplace(articles_[i].url, i).second) {
            throw std::invalid_argument("duplicate article URL " + articles_[i].url);
        }
    }
}

const Article* Corpus::find(const ArticleKey& key) const {
    auto it = std::lower_bound(articles_.begin(), articles_.end(), key,
                               [](const Article& a, const ArticleKey& k) { return a.key() < k; });
    return it != articles_.end() && it->key() == key ? &*it : nullptr;
}

const Article* Corpus::find_url(std::string_view url) const {
    auto it = by_url_.find(url);
    return it == by_url_.end() ? nullptr : &articles_[it->second];
}

std::vector<std::string> Corpus::sites() const {
    std::vector<std::string> out;
    for (const auto& a : articles_) {
        if (out.empty() || out.back() != a.site_id) out.push_back(a.site_id);
    }
    return out;
}

// ---------------------------------------------------------------- JSONL

namespace {

ordered_json to_json(const Article& a) {
    ordered_json j;
    j["site_id"] = a.site_id;
    j["post_id"] = a.post_id;
    j["url"] = a.url;
    j["language"] = a.language;
    j["title"] = a.title;
    j["author_name"] = a.author_name;
    j["date_gmt"] = format_utc(a.date_gmt);
    j["modified_gmt"] = format_utc(a.modified_gmt);
    j["date_msk"] = format_moscow(a.date_msk);
    j["modified_msk"] = format_moscow(a.modified_msk);
    j["categories"] = a.categories;
    j["tags"] = a.tags;
    j["paragraphs"] = a.paragraphs;
    j["text"] = a.text;
    j["links"] = ordered_json::array();
    for (const auto& l : a.links) j["links"].push_back({{"text", l.text}, {"href", l.href}});
    j["image_urls"] = a.image_urls;
    j["translation_refs"] = ordered_json::array();
    for (const auto& r : a.translation_refs) {
        j["translation_refs"].push_back({{"language", r.language}, {"url", r.url}});
    }
    return j;
}

Article from_json(const ordered_json& j) {
    Article a;
    a.site_id = j.at("site_id").get<std::string>();
    a.post_id = j.at("post_id").get<PostId>();
    a.url = j.at("url").get<std::string>();
    a.language = j.at("language").get<std::string>();
    a.title = j.at("title").get<std::string>();
    a.author_name = j.value("author_name", "");
    a.date_gmt = parse_timestamp(j.at("date_gmt").get<std::string>());
    a.modified_gmt = parse_timestamp(j.at("modified_gmt").get<std::string>());
    // the Moscow fields are derived; a stored value that disagrees is an error
    a.date_msk = to_moscow(a.date_gmt);
    a.modified_msk = to_moscow(a.modified_gmt);
    if (j.contains("date_msk") && parse_timestamp(j["date_msk"].get<std::string>()) != a.date_gmt) {
        throw std::invalid_argument("date_msk is not date_gmt + 3h");
    }
    a.categories = j.value("categories", std::vector<std::string>{});
    a.tags = j.value("tags", std::vector<std::string>{});
    a.paragraphs = j.at("paragraphs").get<std::vector<std::string>>();
    a.text = j.value("text", join_paragraphs(a.paragraphs));
    for (const auto& l : j.value("links", ordered_json::array())) {
        a.links.push_back({l.at("text").get<std::string>(), l.at("href").get<std::string>()});
    }
    a.image_urls = j.value("image_urls", std::vector<std::string>{});
    for (const auto& r : j.value("translation_refs", ordered_json::array())) {
        a.translation_refs.push_back({r.at("language").get<std::string>(), r.at("url").get<std::string>()});
    }
    return a;
}

}  // namespace

std::string article_to_json(const Article& article, int indent) {
    return to_json(article).dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

Article article_from_json(std::string_view json) { return from_json(ordered_json::parse(json)); }

Corpus read_corpus(std::istream& is) {
    std::vector<Article> articles;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            articles.push_back(from_json(ordered_json::parse(line)));
        } catch (const std::exception& e) {
            throw CorpusFormatError(lineno, e.what());
        }
    }
    return Corpus(std::move(articles));
}

void write_corpus(std::ostream& os, const Corpus& corpus) {
    for (const auto& a : corpus) {
        os << article_to_json(a) << '\n';
    }
}

Corpus load_corpus(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open corpus " + path.string());
    return read_corpus(is);
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write corpus " + path.string());
    write_corpus(os, corpus);
}

// ---------------------------------------------------------------- tokens

namespace {

const std::unordered_set<std::string_view>& stopword_set() {
    static const std::unordered_set<std::string_view> set = [] {
        std::unordered_set<std::string_view> s;
        for (const auto& w : stopwords()) s.insert(w);
        return s;
    }();
    return set;
}

struct Segment {
    std::size_t begin;
    std::size_t end;
};

// UAX #29 word boundaries, whitespace segments dropped, CJK ideographs split
// one per token.
std::vector<Segment> raw_segments(std::string_view s) {
    std::vector<Segment> out;
    if (s.empty()) return out;
    auto cps = text::decode_utf8(s);
    icu::UnicodeString u;
    std::vector<std::size_t> u16_to_cp;  // utf16 index -> cp index
    for (std::size_t i = 0; i < cps.size(); ++i) {
        u.append(static_cast<UChar32>(cps[i].value));
        while (static_cast<std::size_t>(u.length()) > u16_to_cp.size()) u16_to_cp.push_back(i);
    }
    u16_to_cp.push_back(cps.size());

    thread_local std::unique_ptr<icu::BreakIterator> iter = [] {
        UErrorCode err = U_ZERO_ERROR;
        std::unique_ptr<icu::BreakIterator> it(icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), err));
        if (U_FAILURE(err)) throw std::runtime_error("ICU word break iterator unavailable");
        return it;
    }();
    iter->setText(u);
    auto byte_at = [&](std::size_t cp) { return cp < cps.size() ? cps[cp].offset : s.size(); };

    int32_t start = iter->first();
    for (int32_t end = iter->next(); end != icu::BreakIterator::DONE; start = end, end = iter->next()) {
        std::size_t cb = u16_to_cp[static_cast<std::size_t>(start)];
        std::size_t ce = u16_to_cp[static_cast<std::size_t>(end)];
        bool all_space = true;
        for (std::size_t k = cb; k < ce; ++k) {
            if (!text::is_space(cps[k].value)) all_space = false;
        }
        if (all_space) continue;
        std::size_t run = cb;
        for (std::size_t k = cb; k < ce; ++k) {
            if (text::is_cjk(cps[k].value)) {
                if (run < k) out.push_back({byte_at(run), byte_at(k)});
                out.push_back({byte_at(k), byte_at(k + 1)});
                run = k + 1;
            }
        }
        if (run < ce) out.push_back({byte_at(run), byte_at(ce)});
    }
    return out;
}

bool has_alnum(std::string_view tok) {
    for (const auto& cp : text::decode_utf8(tok)) {
        if (text::is_alnum(cp.value)) return true;
    }
    return false;
}

std::string fold_apostrophes(std::string_view tok) {
    std::string out;
    for (const auto& cp : text::decode_utf8(tok)) {
        if (cp.value == U'’' || cp.value == U'‘' || cp.value == U'ʼ') {
            out.push_back('\'');
        } else {
            out.append(tok.substr(cp.offset, cp.length));
        }
    }
    return out;
}

}  // namespace

const std::vector<std::string>& stopwords() {
    static const std::vector<std::string> words = [] {
        std::vector<std::string> out;
        std::istringstream is{std::string(detail::kStopwordData)};
        std::string line;
        while (std::getline(is, line)) {
            auto t = text::trim(line);
            if (t.empty() || t.front() == '#') continue;
            out.emplace_back(t);
        }
        return out;
    }();
    return words;
}

std::string_view stopword_list_checksum() { return detail::kStopwordSha256; }

bool is_stopword(std::string_view lowered) { return stopword_set().count(lowered) > 0; }

std::vector<std::string> tokenize(std::string_view s, TokenMode mode) {
    auto segments = raw_segments(s);
    std::vector<std::string> out;
    if (mode == TokenMode::Raw) {
        out.reserve(segments.size());
        for (const auto& seg : segments) out.emplace_back(s.substr(seg.begin, seg.end - seg.begin));
        return out;
    }
    // Analysis: re-join intra-word hyphens ("anti-russian"), fold apostrophes,
    // lowercase, drop possessive 's, drop punctuation and stopwords.
    std::vector<std::string> merged;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        std::string_view tok = s.substr(segments[i].begin, segments[i].end - segments[i].begin);
        std::string word(tok);
        std::size_t end = segments[i].end;
        while (has_alnum(word) && i + 2 < segments.size() && segments[i + 1].begin == end &&
               segments[i + 2].begin == segments[i + 1].end &&
               s.substr(segments[i + 1].begin, segments[i + 1].end - segments[i + 1].begin) == "-" &&
               has_alnum(s.substr(segments[i + 2].begin, segments[i + 2].end - segments[i + 2].begin))) {
            word += "-";
            word += s.substr(segments[i + 2].begin, segments[i + 2].end - segments[i + 2].begin);
            end = segments[i + 2].end;
            i += 2;
        }
        merged.push_back(std::move(word));
    }
    for (auto& tok : merged) {
        if (!has_alnum(tok)) continue;
        std::string lowered = text::to_lower(fold_apostrophes(tok));
        if (lowered.size() > 2 && lowered.ends_with("'s") && !is_stopword(lowered)) {
            lowered.resize(lowered.size() - 2);
        }
        while (!lowered.empty() && lowered.front() == '\'') lowered.erase(lowered.begin());
        while (!lowered.empty() && lowered.back() == '\'') lowered.pop_back();
        if (lowered.empty() || !has_alnum(lowered) || is_stopword(lowered)) continue;
        out.push_back(std::move(lowered));
    }
    return out;
}

std::vector<std::string> word_tokens(std::string_view s) {
    std::vector<std::string> out;
    for (auto& tok : tokenize(s, TokenMode::Raw)) {
        if (has_alnum(tok)) out.push_back(text::to_lower(fold_apostrophes(tok)));
    }
    return out;
}

// ---------------------------------------------------------------- sentences

std::string Sentence::id() const { return article.str() + "/" + std::to_string(ordinal); }

namespace {

bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }
bool is_cjk_terminal(char32_t c) { return c == U'。' || c == U'！' || c == U'？'; }
bool is_closing(char32_t c) {
    return c == U'"' || c == U'\'' || c == U'”' || c == U'’' || c == U'»' || c == U')' || c == U']' ||
           c == U'」' || c == U'』' || c == U'）';
}

const std::set<std::string, std::less<>>& abbreviations() {
    static const std::set<std::string, std::less<>> set = {
        "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc", "e.g", "i.e", "u.s", "u.k",
        "u.n", "gen", "col", "lt", "sgt", "capt", "cmdr", "adm", "gov", "sen", "rep", "rev", "hon",
        "pres", "no", "nos", "inc", "ltd", "co", "corp", "dept", "est", "fig", "jan", "feb", "mar",
        "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec", "mt", "ft", "approx", "vol",
        "pp", "ca", "al", "cf", "op", "ed", "eds", "mln", "bln"};
    return set;
}

// Word (letters and inner dots) ending just before cps[dot].
bool guarded_abbreviation(const std::vector<text::CodePoint>& cps, std::size_t dot, std::string_view s) {
    std::size_t b = dot;
    while (b > 0 && (text::is_letter(cps[b - 1].value) || (cps[b - 1].value == U'.' && b > 1 && text::is_letter(cps[b - 2].value)))) {
        --b;
    }
    if (b == dot) return false;
    std::string word(s.substr(cps[b].offset, cps[dot].offset - cps[b].offset));
    // single capital initial, "J. Smith"
    if (dot - b == 1 && u_isupper(static_cast<UChar32>(cps[b].value))) return true;
    return abbreviations().count(text::to_lower(word)) > 0;
}

}  // namespace

std::vector<Sentence> split_sentences(std::string_view s) {
    std::vector<Sentence> out;
    auto cps = text::decode_utf8(s);
    std::size_t start = 0;  // cp index
    auto emit = [&](std::size_t end_cp) {
        std::size_t b = start < cps.size() ? cps[start].offset : s.size();
        std::size_t e = end_cp < cps.size() ? cps[end_cp].offset : s.size();
        auto piece = text::trim(s.substr(b, e - b));
        if (!piece.empty()) {
            Sentence sent;
            sent.ordinal = static_cast<int>(out.size());
            sent.text = std::string(piece);
            sent.token_count = static_cast<int>(tokenize(piece, TokenMode::Raw).size());
            out.push_back(std::move(sent));
        }
        start = end_cp;
    };
    std::size_t i = 0;
    while (i < cps.size()) {
        char32_t c = cps[i].value;
        if (c == U'\n' || c == U'\r' || c == 0x2029 || c == 0x2028) {
            emit(i);
            start = ++i;
            continue;
        }
        if (is_cjk_terminal(c)) {
            std::size_t j = i + 1;
            while (j < cps.size() && (is_cjk_terminal(cps[j].value) || is_closing(cps[j].value))) ++j;
            emit(j);
            i = j;
            continue;
        }
        if (is_terminal(c)) {
            std::size_t j = i + 1;
            while (j < cps.size() && (is_terminal(cps[j].value) || is_closing(cps[j].value))) ++j;
            bool at_break = j == cps.size() || text::is_space(cps[j].value);
            bool guarded = c == U'.' && j == i + 1 && guarded_abbreviation(cps, i, s);
            if (at_break && !guarded) {
                emit(j);
            }
            i = j;
            continue;
        }
        ++i;
    }
    emit(cps.size());
    return out;
}

std::vector<Sentence> article_sentences(const Article& article) {
    auto out = split_sentences(article.text);
    for (auto& s : out) s.article = article.key();
    return out;
}

// ---------------------------------------------------------------- duplicates

std::string normalize_for_duplicates(std::string_view s) {
    return text::collapse_whitespace(text::ascii_quotes(text::nfc(s)));
}

std::vector<DuplicatePair> find_cross_site_duplicates(const Corpus& corpus) {
    std::unordered_map<std::string, std::vector<const Article*>> buckets;
    for (const auto& a : corpus) {
        auto norm = normalize_for_duplicates(a.text);
        if (norm.empty()) continue;
        buckets[std::move(norm)].push_back(&a);
    }
    std::vector<DuplicatePair> out;
    for (const auto& [_, members] : buckets) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                if (members[i]->site_id == members[j]->site_id) continue;
                auto a = members[i]->key();
                auto b = members[j]->key();
                if (b < a) std::swap(a, b);
                out.push_back({a, b});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const DuplicatePair& x, const DuplicatePair& y) {
        return std::tie(x.first, x.second) < std::tie(y.first, y.second);
    });
    return out;
}

// ---------------------------------------------------------------- cyrillic

std::string_view to_string(CyrillicSuggestion s) {
    return s == CyrillicSuggestion::Accidental ? "accidental" : "forgotten_or_intentional";
}

std::string_view to_string(CyrillicCategory c) {
    switch (c) {
        case CyrillicCategory::Accidental: return "accidental";
        case CyrillicCategory::Forgotten: return "forgotten";
        case CyrillicCategory::Intentional: return "intentional";
        case CyrillicCategory::Unclear: return "unclear";
        case CyrillicCategory::Unannotated: return "unannotated";
    }
    return "unannotated";
}

CyrillicCategory parse_cyrillic_category(std::string_view s) {
    for (auto c : {CyrillicCategory::Accidental, CyrillicCategory::Forgotten, CyrillicCategory::Intentional,
                   CyrillicCategory::Unclear, CyrillicCategory::Unannotated}) {
        if (to_string(c) == s) return c;
    }
    throw std::invalid_argument("unknown Cyrillic category: " + std::string(s));
}

std::vector<CyrillicFinding> detect_cyrillic(const Article& article) {
    constexpr std::size_t kContext = 40;
    const std::string& s = article.text;
    auto cps = text::decode_utf8(s);
    auto slice = [&](std::size_t b, std::size_t e) {
        std::size_t bb = b < cps.size() ? cps[b].offset : s.size();
        std::size_t ee = e < cps.size() ? cps[e].offset : s.size();
        return s.substr(bb, ee - bb);
    };
    std::vector<CyrillicFinding> out;
    std::size_t i = 0;
    while (i < cps.size()) {
        if (!text::is_cyrillic(cps[i].value)) {
            ++i;
            continue;
        }
        std::size_t b = i;
        std::size_t e = i + 1;
        // extend across gaps that contain no letters
        std::size_t j = e;
        while (j < cps.size()) {
            if (text::is_cyrillic(cps[j].value)) {
                e = ++j;
            } else if (!text::is_letter(cps[j].value)) {
                ++j;
            } else {
                break;
            }
        }
        CyrillicFinding f;
        f.article = article.key();
        f.start = b;
        f.end = e;
        f.matched = slice(b, e);
        f.context = slice(b >= kContext ? b - kContext : 0, std::min(cps.size(), e + kContext));
        if (e - b == 1) {
            // homoglyph: lone Cyrillic letter inside a word that has Latin letters
            bool latin = false;
            for (std::size_t k = b; k-- > 0 && text::is_letter(cps[k].value);) {
                latin = latin || text::is_latin_letter(cps[k].value);
            }
            for (std::size_t k = e; k < cps.size() && text::is_letter(cps[k].value); ++k) {
                latin = latin || text::is_latin_letter(cps[k].value);
            }
            if (latin) f.suggested = CyrillicSuggestion::Accidental;
        }
        out.push_back(std::move(f));
        i = e;
    }
    return out;
}

std::vector<CyrillicAnnotation> read_cyrillic_annotations(std::istream& is) {
    std::vector<CyrillicAnnotation> out;
    auto rows = read_csv(is);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (r == 0 && !row.empty() && row[0] == "site_id") continue;
        if (row.size() != 5) {
            throw CorpusFormatError(r + 1, "annotation rows need 5 fields");
        }
        try {
            CyrillicAnnotation a;
            a.article = {row[0], std::stoll(row[1])};
            a.start = std::stoull(row[2]);
            a.end = std::stoull(row[3]);
            a.category = parse_cyrillic_category(row[4]);
            out.push_back(std::move(a));
        } catch (const std::exception& e) {
            throw CorpusFormatError(r + 1, e.what());
        }
    }
    return out;
}

std::size_t apply_annotations(std::vector<CyrillicFinding>& findings,
                              const std::vector<CyrillicAnnotation>& annotations) {
    std::size_t unmatched = 0;
    for (const auto& ann : annotations) {
        auto it = std::find_if(findings.begin(), findings.end(), [&](const CyrillicFinding& f) {
            return f.article == ann.article && f.start == ann.start && f.end == ann.end;
        });
        if (it == findings.end()) {
            ++unmatched;
        } else {
            it->final_category = ann.category;
        }
    }
    return unmatched;
}

}  // namespace wpf
