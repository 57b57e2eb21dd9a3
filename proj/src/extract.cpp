#include "wpf/extract.hpp"

#include "wpf/html.hpp"
#include "wpf/text.hpp"
#include "wpf/url.hpp"

#include <json.hpp>
#include <unicode/ucnv.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace wpf {

namespace {

using html::Node;
using html::Selector;

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_block(std::string_view tag) {
    static const std::set<std::string_view> blocks = {
        "p", "div", "h1", "h2", "h3", "h4", "h5", "h6", "li", "ul", "ol", "blockquote", "figure",
        "table", "thead", "tbody", "tr", "td", "th", "section", "article", "pre", "header", "footer",
        "aside", "nav", "dl", "dt", "dd", "hr", "main", "details", "summary"};
    return blocks.contains(tag);
}

bool is_skipped(std::string_view tag) {
    return tag == "script" || tag == "style" || tag == "noscript" || tag == "iframe" || tag == "template" ||
           tag == "svg" || tag == "button" || tag == "form";
}

/// "zh-Hans" -> "zh", "en_US" -> "en"
std::string language_code(std::string_view raw) {
    auto s = lower_ascii(text::trim(raw));
    auto cut = s.find_first_of("-_");
    return cut == std::string::npos ? s : s.substr(0, cut);
}

struct BodyWalker {
    const Selector* exclude;
    std::string base_url;
    std::vector<std::string> paragraphs;
    std::vector<Link> links;
    std::vector<std::string> images;
    std::string buffer;

    void flush() {
        auto p = text::collapse_whitespace(buffer);
        if (!p.empty()) paragraphs.push_back(std::move(p));
        buffer.clear();
    }

    bool excluded(const Node& n) const { return is_skipped(n.tag) || (exclude && exclude->matches(n)); }

    void visible_text(const Node& n, std::string& out) const {
        for (const auto& c : n.children) {
            if (c->kind == Node::Kind::Text) out += c->text;
            else if (c->is_element() && !excluded(*c)) {
                if (c->is_element("br") || is_block(c->tag)) out += ' ';
                visible_text(*c, out);
            }
        }
    }

    void walk(const Node& n) {
        for (const auto& child : n.children) {
            const Node& c = *child;
            if (c.kind == Node::Kind::Text) {
                buffer += c.text;
                continue;
            }
            if (!c.is_element()) continue;
            if (excluded(c)) {
                if (is_block(c.tag)) flush();
                continue;
            }
            if (c.is_element("br")) {
                flush();
                continue;
            }
            if (c.is_element("img")) {
                const std::string* src = c.attr("src");
                if (!src || text::trim(*src).empty() || src->starts_with("data:")) src = c.attr("data-src");
                if (src && !text::trim(*src).empty() && !src->starts_with("data:")) {
                    auto url = resolve_url(base_url, text::trim(*src));
                    if (std::find(images.begin(), images.end(), url) == images.end()) images.push_back(url);
                }
                continue;
            }
            if (c.is_element("a")) {
                if (const std::string* href = c.attr("href")) {
                    auto h = text::trim(*href);
                    if (!h.empty() && !h.starts_with("#") && !lower_ascii(h.substr(0, 11)).starts_with("javascript:")) {
                        std::string anchor;
                        visible_text(c, anchor);
                        links.push_back({text::collapse_whitespace(anchor), resolve_url(base_url, h)});
                    }
                }
            }
            bool block = is_block(c.tag);
            if (block) flush();
            walk(c);
            if (block) flush();
        }
    }
};

const Node* body_root(const html::Document& doc, const SiteExtractionConfig& config) {
    if (config.body_root.empty()) return &doc.root();
    auto hits = html::select(doc.root(), Selector::parse(config.body_root));
    return hits.empty() ? nullptr : hits.front();
}

std::optional<Selector> compile_optional(const std::string& text) {
    if (text::trim(text).empty()) return std::nullopt;
    return Selector::parse(text);
}

std::string strip_inline(const std::string& s) { return text::collapse_whitespace(s); }

std::string escape_html(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- config

std::map<std::string, SiteExtractionConfig> read_extraction_config(std::istream& is) {
    std::map<std::string, SiteExtractionConfig> out;
    SiteExtractionConfig* current = nullptr;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto t = text::trim(line);
        if (t.empty() || t.front() == '#' || t.front() == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(lineno, "unterminated section header");
            std::string id(text::trim(t.substr(1, t.size() - 2)));
            if (id.empty()) throw ConfigError(lineno, "empty section name");
            if (out.contains(id)) throw ConfigError(lineno, "duplicate section " + id);
            current = &out[id];
            current->id = id;
            continue;
        }
        if (!current) throw ConfigError(lineno, "key outside a section");
        auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ConfigError(lineno, "expected key = value");
        auto key = lower_ascii(text::trim(t.substr(0, eq)));
        std::string value(text::trim(t.substr(eq + 1)));
        if (key == "default_language") {
            if (!is_known_language(value)) throw ConfigError(lineno, "unknown language " + value);
            current->default_language = value;
        } else if (key == "body_root") {
            current->body_root = value;
        } else if (key == "body_exclude") {
            current->body_exclude = value;
        } else if (key == "picker_links") {
            current->picker_links = value;
        } else if (key == "picker_language_attr") {
            current->picker_language_attr = lower_ascii(value);
        } else if (key == "picker_current") {
            current->picker_current = value;
        } else {
            throw ConfigError(lineno, "unknown key " + key);
        }
        if (key != "default_language" && key != "picker_language_attr" && !value.empty()) {
            try {
                (void)Selector::parse(value);
            } catch (const std::exception& e) {
                throw ConfigError(lineno, std::string("bad selector: ") + e.what());
            }
        }
    }
    return out;
}

std::map<std::string, SiteExtractionConfig> load_extraction_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_extraction_config(in);
}

std::map<std::int64_t, std::string> read_name_map(std::string_view json) {
    std::map<std::int64_t, std::string> out;
    auto j = nlohmann::json::parse(json);
    if (!j.is_array()) throw std::runtime_error("metadata payload is not an array");
    for (const auto& item : j) out[item.at("id").get<std::int64_t>()] = item.at("name").get<std::string>();
    return out;
}

// ---------------------------------------------------------------- decoding

std::optional<std::string> sniff_charset(std::string_view page) {
    auto doc = html::parse(page.substr(0, std::min<std::size_t>(page.size(), 8192)));
    for (const Node* meta : html::select(doc.root(), Selector::parse("meta"))) {
        if (const std::string* cs = meta->attr("charset")) {
            auto v = lower_ascii(text::trim(*cs));
            if (!v.empty()) return v;
        }
        const std::string* equiv = meta->attr("http-equiv");
        const std::string* content = meta->attr("content");
        if (equiv && content && lower_ascii(*equiv) == "content-type") {
            auto c = lower_ascii(*content);
            auto pos = c.find("charset=");
            if (pos != std::string::npos) {
                auto v = c.substr(pos + 8);
                auto end = v.find_first_of("; \"'");
                return std::string(text::trim(v.substr(0, end)));
            }
        }
    }
    return std::nullopt;
}

std::string decode_page(std::string_view bytes, std::string_view charset, std::size_t* replaced) {
    auto cs = lower_ascii(text::trim(charset));
    std::size_t count = 0;
    std::string out;
    if (cs.empty() || cs == "utf-8" || cs == "utf8") {
        count = text::sanitize_utf8(bytes, out);
    } else {
        UErrorCode err = U_ZERO_ERROR;
        UConverter* conv = ucnv_open(cs.c_str(), &err);
        if (U_FAILURE(err)) throw std::invalid_argument("unknown charset " + cs);
        ucnv_setToUCallBack(conv, UCNV_TO_U_CALLBACK_STOP, nullptr, nullptr, nullptr, &err);
        std::u16string u16(bytes.size() * 2 + 16, u'\0');
        auto convert = [&](UErrorCode& e) {
            ucnv_reset(conv);
            return ucnv_toUChars(conv, u16.data(), static_cast<int32_t>(u16.size()), bytes.data(),
                                 static_cast<int32_t>(bytes.size()), &e);
        };
        int32_t len = convert(err);
        if (U_FAILURE(err)) {
            err = U_ZERO_ERROR;
            const UChar sub[] = {0xFFFD};
            ucnv_setSubstString(conv, sub, 1, &err);
            ucnv_setToUCallBack(conv, UCNV_TO_U_CALLBACK_SUBSTITUTE, nullptr, nullptr, nullptr, &err);
            err = U_ZERO_ERROR;
            len = convert(err);
            count = static_cast<std::size_t>(std::count(u16.begin(), u16.begin() + len, u'\uFFFD'));
            if (count == 0) count = 1;
        }
        ucnv_close(conv);
        if (U_FAILURE(err)) throw std::runtime_error("charset conversion failed");
        u16.resize(static_cast<std::size_t>(len));
        for (std::size_t i = 0; i < u16.size(); ++i) {
            char32_t cp = u16[i];
            if (cp >= 0xD800 && cp <= 0xDBFF && i + 1 < u16.size() && u16[i + 1] >= 0xDC00 && u16[i + 1] <= 0xDFFF) {
                cp = 0x10000 + ((cp - 0xD800) << 10) + (u16[i + 1] - 0xDC00);
                ++i;
            }
            text::append_utf8(out, cp);
        }
    }
    if (replaced) *replaced = count;
    return out;
}

// ---------------------------------------------------------------- extraction

std::vector<std::string> extract_paragraphs(std::string_view body_html, const SiteExtractionConfig& config) {
    auto doc = html::parse(body_html);
    auto exclude = compile_optional(config.body_exclude);
    BodyWalker w{exclude ? &*exclude : nullptr, {}, {}, {}, {}, {}};
    if (const Node* root = body_root(doc, config)) w.walk(*root);
    w.flush();
    return w.paragraphs;
}

TranslationExtraction extract_translations(std::string_view page_html, const SiteExtractionConfig& config,
                                           std::optional<std::string> self_language) {
    TranslationExtraction out;
    if (text::trim(config.picker_links).empty()) return out;
    auto doc = html::parse(page_html);
    auto picker = Selector::parse(config.picker_links);

    if (!self_language && !text::trim(config.picker_current).empty()) {
        auto current = html::select(doc.root(), Selector::parse(config.picker_current));
        for (const Node* c : current) {
            if (const std::string* v = c->attr(config.picker_language_attr)) {
                self_language = language_code(*v);
                break;
            }
            for (const Node* d : html::select(*c, Selector::parse("[" + config.picker_language_attr + "]"))) {
                self_language = language_code(*d->attr(config.picker_language_attr));
                break;
            }
            if (self_language) break;
        }
    }
    if (!self_language) {
        if (const Node* h = doc.find_first("html")) {
            if (const std::string* lang = h->attr("lang")) self_language = language_code(*lang);
        }
    }

    std::set<std::string> seen;
    auto attr_selector = Selector::parse("[" + config.picker_language_attr + "]");
    for (const Node* a : html::select(doc.root(), picker)) {
        const std::string* href = a->attr("href");
        if (!href || text::trim(*href).empty()) continue;
        std::optional<std::string> lang;
        if (const std::string* v = a->attr(config.picker_language_attr)) {
            lang = language_code(*v);
        } else {
            auto inner = html::select(*a, attr_selector);
            if (!inner.empty()) lang = language_code(*inner.front()->attr(config.picker_language_attr));
        }
        if (!lang) lang = path_language(*href).value_or("");
        if (lang->empty()) {
            out.warnings.push_back("picker link without language: " + *href);
            continue;
        }
        if (!is_known_language(*lang)) {
            out.warnings.push_back("unknown picker language '" + *lang + "': " + *href);
            continue;
        }
        if (self_language && *lang == *self_language) continue;
        if (!seen.insert(*lang).second) {
            out.warnings.push_back("duplicate picker language '" + *lang + "': " + *href);
            continue;
        }
        out.refs.push_back({*lang, std::string(text::trim(*href))});
    }
    return out;
}

ExtractResult extract_article(const RawPost& raw, std::string_view page_html, const SiteExtractionConfig& config,
                              const SiteMeta& meta, std::string_view page_charset) {
    ExtractResult r;
    Article& a = r.article;
    a.site_id = config.id;
    a.post_id = raw.id;
    a.url = raw.link;
    a.language = path_language(raw.link).value_or(config.default_language);
    a.date_gmt = raw.date_gmt;
    a.modified_gmt = raw.modified_gmt;
    a.date_msk = to_moscow(raw.date_gmt);
    a.modified_msk = to_moscow(raw.modified_gmt);

    {
        std::string title_utf8;
        if (text::sanitize_utf8(raw.title_html, title_utf8) > 0) r.warnings.push_back("invalid UTF-8 in title replaced");
        auto doc = html::parse(title_utf8);
        a.title = strip_inline(html::text_content(doc.root()));
    }

    std::string body;
    if (text::sanitize_utf8(raw.content_html, body) > 0) r.warnings.push_back("invalid UTF-8 in content replaced");
    auto doc = html::parse(body);
    auto exclude = compile_optional(config.body_exclude);
    BodyWalker w{exclude ? &*exclude : nullptr, raw.link, {}, {}, {}, {}};
    if (const Node* root = body_root(doc, config)) {
        w.walk(*root);
    } else {
        r.warnings.push_back("body root '" + config.body_root + "' not found");
    }
    w.flush();
    a.paragraphs = std::move(w.paragraphs);
    a.text = join_paragraphs(a.paragraphs);
    a.links = std::move(w.links);
    a.image_urls = std::move(w.images);
    if (a.paragraphs.empty()) r.warnings.push_back("empty content");

    if (meta.users.contains(raw.author)) {
        a.author_name = meta.users.at(raw.author);
    } else {
        r.warnings.push_back("unknown author id " + std::to_string(raw.author));
    }
    for (auto id : raw.categories) {
        if (auto it = meta.categories.find(id); it != meta.categories.end()) a.categories.push_back(it->second);
        else r.warnings.push_back("unknown category id " + std::to_string(id));
    }
    for (auto id : raw.tags) {
        if (auto it = meta.tags.find(id); it != meta.tags.end()) a.tags.push_back(it->second);
        else r.warnings.push_back("unknown tag id " + std::to_string(id));
    }

    if (!page_html.empty()) {
        std::string charset(page_charset);
        if (charset.empty()) charset = sniff_charset(page_html).value_or("utf-8");
        std::string page;
        try {
            std::size_t replaced = 0;
            page = decode_page(page_html, charset, &replaced);
            if (replaced > 0) r.warnings.push_back("undecodable page bytes replaced (" + std::to_string(replaced) + ")");
        } catch (const std::invalid_argument& e) {
            r.warnings.push_back(std::string(e.what()) + ", decoded as UTF-8");
            std::size_t replaced = text::sanitize_utf8(page_html, page);
            if (replaced > 0) r.warnings.push_back("undecodable page bytes replaced (" + std::to_string(replaced) + ")");
        }
        auto tr = extract_translations(page, config, a.language);
        for (auto& ref : tr.refs) ref.url = resolve_url(raw.link, ref.url);
        a.translation_refs = std::move(tr.refs);
        r.warnings.insert(r.warnings.end(), tr.warnings.begin(), tr.warnings.end());
    }
    return r;
}

RenderedArticle render_article(const Article& article) {
    RenderedArticle out;
    RawPost& raw = out.raw;
    raw.id = article.post_id;
    raw.date_gmt = article.date_gmt;
    raw.modified_gmt = article.modified_gmt;
    raw.link = article.url;
    raw.title_html = escape_html(article.title);

    std::vector<bool> placed(article.links.size(), false);
    std::string content;
    for (const auto& p : article.paragraphs) {
        std::string para;
        std::size_t pos = 0;
        for (std::size_t i = 0; i < article.links.size(); ++i) {
            const auto& l = article.links[i];
            if (placed[i] || l.text.empty()) continue;
            auto hit = p.find(l.text, pos);
            if (hit == std::string::npos) continue;
            para += escape_html(p.substr(pos, hit - pos));
            para += "<a href=\"" + escape_html(l.href) + "\">" + escape_html(l.text) + "</a>";
            pos = hit + l.text.size();
            placed[i] = true;
        }
        para += escape_html(p.substr(pos));
        content += "<p>" + para + "</p>\n";
    }
    for (std::size_t i = 0; i < article.links.size(); ++i) {
        if (!placed[i]) content += "<a href=\"" + escape_html(article.links[i].href) + "\"></a>\n";
    }
    for (const auto& img : article.image_urls) content += "<img src=\"" + escape_html(img) + "\">\n";
    raw.content_html = content;

    std::string page = "<!DOCTYPE html>\n<html lang=\"" + article.language + "\">\n<head><meta charset=\"utf-8\"></head>\n<body>\n";
    page += "<nav class=\"language-picker\">\n";
    for (const auto& ref : article.translation_refs) {
        page += "<a hreflang=\"" + ref.language + "\" href=\"" + escape_html(ref.url) + "\">" + ref.language + "</a>\n";
    }
    page += "</nav>\n<article>" + content + "</article>\n</body>\n</html>\n";
    out.page_html = std::move(page);
    return out;
}

// ---------------------------------------------------------------- groups

std::string_view to_string(ConflictReport::Kind kind) {
    return kind == ConflictReport::Kind::SameLanguage ? "same_language" : "dangling_ref";
}

GroupResolution resolve_translation_groups(const std::vector<Article>& input) {
    std::vector<std::size_t> order(input.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return input[x].key() < input[y].key(); });

    std::map<std::string, std::size_t> by_url;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!by_url.emplace(normalize_url(input[order[i]].url), i).second) {
            throw std::invalid_argument("duplicate article URL " + input[order[i]].url);
        }
    }

    std::vector<std::size_t> parent(order.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    struct Dangling {
        std::size_t source;
        TranslationRef ref;
    };
    std::vector<Dangling> dangling;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& ref : input[order[i]].translation_refs) {
            auto it = by_url.find(normalize_url(ref.url));
            if (it == by_url.end()) {
                dangling.push_back({i, ref});
                continue;
            }
            auto a = find(i), b = find(it->second);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }

    GroupResolution out;
    std::map<std::size_t, int> group_of_root;
    std::vector<int> group_of(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto root = find(i);
        auto [it, inserted] = group_of_root.emplace(root, static_cast<int>(out.groups.size()));
        if (inserted) {
            out.groups.emplace_back();
            out.groups.back().group_id = it->second;
        }
        group_of[i] = it->second;
        out.groups[static_cast<std::size_t>(it->second)].article_keys.push_back(input[order[i]].key());
    }

    std::vector<std::map<std::string, std::vector<ArticleKey>>> by_language(out.groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Article& a = input[order[i]];
        by_language[static_cast<std::size_t>(group_of[i])][a.language].push_back(a.key());
    }
    for (auto& g : out.groups) {
        for (auto& [lang, keys] : by_language[static_cast<std::size_t>(g.group_id)]) {
            std::stable_sort(keys.begin(), keys.end(), [](const ArticleKey& x, const ArticleKey& y) {
                return std::tie(x.post_id, x.site_id) < std::tie(y.post_id, y.site_id);
            });
            g.members[lang] = keys.front();
            if (keys.size() > 1) {
                ConflictReport rep;
                rep.kind = ConflictReport::Kind::SameLanguage;
                rep.group_id = g.group_id;
                rep.articles = keys;
                rep.language = lang;
                out.reports.push_back(std::move(rep));
            }
        }
        g.orphaned = g.article_keys.size() == 1;
    }
    for (const auto& d : dangling) {
        ConflictReport rep;
        rep.kind = ConflictReport::Kind::DanglingRef;
        rep.group_id = group_of[d.source];
        rep.articles = {input[order[d.source]].key()};
        rep.language = d.ref.language;
        rep.url = d.ref.url;
        out.reports.push_back(std::move(rep));
    }
    return out;
}

// ---------------------------------------------------------------- snapshots

namespace {

bool is_site_dir(const std::filesystem::path& p) { return std::filesystem::is_directory(p / "posts"); }

void extract_site(const std::filesystem::path& dir, const std::map<std::string, SiteExtractionConfig>& configs,
                  SnapshotExtraction& out) {
    namespace fs = std::filesystem;
    std::string site_id = dir.filename().string();
    std::map<std::int64_t, std::string> charsets;
    if (fs::exists(dir / "manifest.json")) {
        auto m = nlohmann::json::parse(read_file(dir / "manifest.json"));
        site_id = m.value("site_id", site_id);
        for (const auto& p : m.value("pages", nlohmann::json::array())) {
            if (p.contains("post_id") && p.contains("charset") && p["charset"].is_string()) {
                charsets[p["post_id"].get<std::int64_t>()] = p["charset"].get<std::string>();
            }
        }
    }
    SiteExtractionConfig config;
    if (auto it = configs.find(site_id); it != configs.end()) config = it->second;
    config.id = site_id;

    SiteMeta meta;
    auto load_meta = [&](const char* name, std::map<std::int64_t, std::string>& target) {
        auto p = dir / "meta" / name;
        if (!fs::exists(p)) {
            out.warnings.push_back(site_id + ": missing meta/" + name);
            return;
        }
        try {
            target = read_name_map(read_file(p));
        } catch (const std::exception& e) {
            out.warnings.push_back(site_id + ": bad meta/" + name + ": " + e.what());
        }
    };
    load_meta("users.json", meta.users);
    load_meta("categories.json", meta.categories);
    load_meta("tags.json", meta.tags);

    std::vector<std::pair<std::int64_t, fs::path>> posts;
    for (const auto& entry : fs::directory_iterator(dir / "posts")) {
        if (entry.path().extension() != ".json") continue;
        try {
            posts.emplace_back(std::stoll(entry.path().stem().string()), entry.path());
        } catch (const std::exception&) {
            out.warnings.push_back(site_id + ": ignoring " + entry.path().filename().string());
        }
    }
    std::sort(posts.begin(), posts.end());
    for (const auto& [id, path] : posts) {
        std::string prefix = site_id + "/" + std::to_string(id) + ": ";
        RawPost raw;
        try {
            raw = parse_raw_post(read_file(path));
        } catch (const std::exception& e) {
            out.warnings.push_back(prefix + e.what());
            ++out.failed_posts;
            continue;
        }
        std::string page;
        auto page_path = dir / "pages" / (std::to_string(id) + ".html");
        if (fs::exists(page_path)) page = read_file(page_path);
        else out.warnings.push_back(prefix + "no page html, translations unavailable");
        auto cs = charsets.find(id);
        auto r = extract_article(raw, page, config, meta, cs == charsets.end() ? std::string_view{} : cs->second);
        for (const auto& w : r.warnings) out.warnings.push_back(prefix + w);
        out.articles.push_back(std::move(r.article));
    }
}

}  // namespace

SnapshotExtraction extract_snapshot(const std::filesystem::path& root,
                                    const std::map<std::string, SiteExtractionConfig>& configs) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw std::runtime_error("snapshot directory not found: " + root.string());
    SnapshotExtraction out;
    if (is_site_dir(root)) {
        extract_site(root, configs, out);
        return out;
    }
    std::vector<fs::path> sites;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory() && is_site_dir(entry.path())) sites.push_back(entry.path());
    }
    std::sort(sites.begin(), sites.end());
    for (const auto& s : sites) extract_site(s, configs, out);
    return out;
}

}  // namespace wpf
