#include "wpf/html.hpp"

#include "wpf/text.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <charconv>
#include <stdexcept>
#include <unordered_map>

namespace wpf::html {

const std::string* Node::attr(std::string_view name) const {
    for (const auto& [k, v] : attrs) {
        if (k == name) return &v;
    }
    return nullptr;
}

bool Node::has_class(std::string_view cls) const {
    const auto* value = attr("class");
    if (!value) return false;
    std::string_view v = *value;
    std::size_t pos = 0;
    while (pos < v.size()) {
        while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
        auto end = pos;
        while (end < v.size() && !std::isspace(static_cast<unsigned char>(v[end]))) ++end;
        if (end > pos && v.substr(pos, end - pos) == cls) return true;
        pos = end;
    }
    return false;
}

namespace {

const std::unordered_map<std::string_view, char32_t>& named_entities() {
    static const std::unordered_map<std::string_view, char32_t> table = [] {
        std::unordered_map<std::string_view, char32_t> t = {
            {"amp", U'&'},       {"lt", U'<'},        {"gt", U'>'},        {"quot", U'"'},
            {"apos", U'\''},     {"nbsp", 0xA0},      {"ndash", 0x2013},   {"mdash", 0x2014},
            {"hellip", 0x2026},  {"laquo", 0xAB},     {"raquo", 0xBB},     {"lsquo", 0x2018},
            {"rsquo", 0x2019},   {"ldquo", 0x201C},   {"rdquo", 0x201D},   {"bdquo", 0x201E},
            {"sbquo", 0x201A},   {"lsaquo", 0x2039},  {"rsaquo", 0x203A},  {"copy", 0xA9},
            {"reg", 0xAE},       {"trade", 0x2122},   {"euro", 0x20AC},    {"pound", 0xA3},
            {"yen", 0xA5},       {"cent", 0xA2},      {"sect", 0xA7},      {"deg", 0xB0},
            {"middot", 0xB7},    {"bull", 0x2022},    {"times", 0xD7},     {"divide", 0xF7},
            {"shy", 0xAD},       {"thinsp", 0x2009},  {"ensp", 0x2002},    {"emsp", 0x2003},
            {"zwnj", 0x200C},    {"zwj", 0x200D},     {"lrm", 0x200E},     {"rlm", 0x200F},
            {"iexcl", 0xA1},     {"iquest", 0xBF},    {"para", 0xB6},      {"plusmn", 0xB1},
            {"frac12", 0xBD},    {"frac14", 0xBC},    {"frac34", 0xBE},    {"micro", 0xB5},
            {"prime", 0x2032},   {"Prime", 0x2033},   {"larr", 0x2190},    {"rarr", 0x2192},
            {"ordf", 0xAA},      {"ordm", 0xBA},      {"sup2", 0xB2},      {"sup3", 0xB3},
        };
        // Latin-1 letters U+00C0..U+00FF in code point order.
        static constexpr std::array<std::string_view, 64> kLatin1 = {
            "Agrave", "Aacute", "Acirc",  "Atilde", "Auml",   "Aring",  "AElig",  "Ccedil",
            "Egrave", "Eacute", "Ecirc",  "Euml",   "Igrave", "Iacute", "Icirc",  "Iuml",
            "ETH",    "Ntilde", "Ograve", "Oacute", "Ocirc",  "Otilde", "Ouml",   "",
            "Oslash", "Ugrave", "Uacute", "Ucirc",  "Uuml",   "Yacute", "THORN",  "szlig",
            "agrave", "aacute", "acirc",  "atilde", "auml",   "aring",  "aelig",  "ccedil",
            "egrave", "eacute", "ecirc",  "euml",   "igrave", "iacute", "icirc",  "iuml",
            "eth",    "ntilde", "ograve", "oacute", "ocirc",  "otilde", "ouml",   "",
            "oslash", "ugrave", "uacute", "ucirc",  "uuml",   "yacute", "thorn",  "yuml"};
        for (std::size_t i = 0; i < kLatin1.size(); ++i) {
            if (!kLatin1[i].empty()) t.emplace(kLatin1[i], static_cast<char32_t>(0xC0 + i));
        }
        return t;
    }();
    return table;
}

// Windows-1252 remapping for numeric references in 0x80..0x9F, as browsers do.
char32_t remap_c1(char32_t cp) {
    static constexpr std::array<char32_t, 32> kMap = {
        0x20AC, 0x81,   0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
        0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0x8D,   0x017D, 0x8F,
        0x90,   0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
        0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0x9D,   0x017E, 0x0178};
    if (cp >= 0x80 && cp <= 0x9F) return kMap[cp - 0x80];
    return cp;
}

}  // namespace

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        auto semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 32) {
            out.push_back(s[i++]);
            continue;
        }
        auto name = s.substr(i + 1, semi - i - 1);
        bool done = false;
        if (!name.empty() && name[0] == '#') {
            unsigned long value = 0;
            std::string_view digits = name.substr(1);
            int base = 10;
            if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
                digits.remove_prefix(1);
                base = 16;
            }
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
            if (!digits.empty() && ec == std::errc{} && ptr == digits.data() + digits.size()) {
                char32_t cp = remap_c1(static_cast<char32_t>(value));
                if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
                text::append_utf8(out, cp);
                done = true;
            }
        } else {
            const auto& table = named_entities();
            if (auto it = table.find(name); it != table.end()) {
                text::append_utf8(out, it->second);
                done = true;
            }
        }
        if (done) {
            i = semi + 1;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

namespace {

bool is_void(std::string_view tag) {
    static constexpr std::array<std::string_view, 14> kVoid = {
        "area", "base", "br", "col", "embed", "hr", "img",
        "input", "link", "meta", "param", "source", "track", "wbr"};
    return std::find(kVoid.begin(), kVoid.end(), tag) != kVoid.end();
}

bool closes_paragraph(std::string_view tag) {
    static constexpr std::array<std::string_view, 30> kTags = {
        "address", "article", "aside",  "blockquote", "details", "div",    "dl",     "fieldset",
        "figcaption", "figure", "footer", "form",    "h1",       "h2",     "h3",     "h4",
        "h5",      "h6",      "header", "hr",         "main",     "nav",    "ol",     "p",
        "pre",     "section", "table",  "ul",         "menu",     "hgroup"};
    return std::find(kTags.begin(), kTags.end(), tag) != kTags.end();
}

bool is_raw_text(std::string_view tag) {
    return tag == "script" || tag == "style" || tag == "textarea" || tag == "title";
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
}

class TreeBuilder {
public:
    TreeBuilder() : root_(std::make_unique<Node>()) {
        root_->kind = Node::Kind::Document;
        stack_.push_back(root_.get());
    }

    void text(std::string_view raw, bool decode) {
        if (raw.empty()) return;
        auto* top = stack_.back();
        std::string decoded = decode ? decode_entities(raw) : std::string(raw);
        if (!top->children.empty() && top->children.back()->kind == Node::Kind::Text) {
            top->children.back()->text += decoded;
            return;
        }
        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::Text;
        node->text = std::move(decoded);
        append(std::move(node));
    }

    void comment(std::string_view body) {
        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::Comment;
        node->text = std::string(body);
        append(std::move(node));
    }

    Node* start(std::string tag, std::vector<std::pair<std::string, std::string>> attrs, bool self_closing) {
        apply_implied_end(tag);
        auto node = std::make_unique<Node>();
        node->kind = Node::Kind::Element;
        node->tag = std::move(tag);
        node->attrs = std::move(attrs);
        Node* raw = node.get();
        append(std::move(node));
        if (!self_closing && !is_void(raw->tag)) stack_.push_back(raw);
        return raw;
    }

    void end(std::string_view tag) {
        for (std::size_t i = stack_.size(); i-- > 1;) {
            if (stack_[i]->tag == tag) {
                stack_.resize(i);
                return;
            }
        }
        // stray end tag: ignored
    }

    std::unique_ptr<Node> finish() { return std::move(root_); }

private:
    void append(std::unique_ptr<Node> node) {
        node->parent = stack_.back();
        stack_.back()->children.push_back(std::move(node));
    }

    // Closes the nearest open element named `target` unless a boundary
    // element is hit first.
    void close_if_open(std::string_view target, std::initializer_list<std::string_view> boundaries) {
        for (std::size_t i = stack_.size(); i-- > 1;) {
            const auto& t = stack_[i]->tag;
            if (t == target) {
                stack_.resize(i);
                return;
            }
            if (std::find(boundaries.begin(), boundaries.end(), t) != boundaries.end()) return;
        }
    }

    void apply_implied_end(const std::string& tag) {
        if (closes_paragraph(tag)) {
            close_if_open("p", {"div", "td", "th", "table", "button", "blockquote", "li",
                                "section", "article", "figure", "body", "html"});
        }
        if (tag == "li") close_if_open("li", {"ul", "ol", "menu"});
        if (tag == "dt" || tag == "dd") {
            close_if_open("dt", {"dl"});
            close_if_open("dd", {"dl"});
        }
        if (tag == "option") close_if_open("option", {"select", "datalist"});
        if (tag == "tr") close_if_open("tr", {"table", "tbody", "thead", "tfoot"});
        if (tag == "td" || tag == "th") {
            close_if_open("td", {"tr", "table"});
            close_if_open("th", {"tr", "table"});
        }
    }

    std::unique_ptr<Node> root_;
    std::vector<Node*> stack_;
};

void skip_space(std::string_view s, std::size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

}  // namespace

Document parse(std::string_view s) {
    TreeBuilder builder;
    std::size_t i = 0;
    std::size_t text_start = 0;
    auto flush_text = [&](std::size_t end) {
        if (end > text_start) builder.text(s.substr(text_start, end - text_start), true);
    };
    while (i < s.size()) {
        if (s[i] != '<') {
            ++i;
            continue;
        }
        if (s.compare(i, 4, "<!--") == 0) {
            flush_text(i);
            auto end = s.find("-->", i + 4);
            if (end == std::string_view::npos) end = s.size();
            builder.comment(s.substr(i + 4, end - i - 4));
            i = std::min(s.size(), end + 3);
            text_start = i;
            continue;
        }
        if (i + 1 < s.size() && (s[i + 1] == '!' || s[i + 1] == '?')) {
            flush_text(i);
            auto end = s.find('>', i);
            i = end == std::string_view::npos ? s.size() : end + 1;
            text_start = i;
            continue;
        }
        if (i + 1 < s.size() && s[i + 1] == '/') {
            std::size_t j = i + 2;
            std::size_t name_start = j;
            while (j < s.size() && is_name_char(s[j])) ++j;
            if (j == name_start) {
                ++i;  // "</" followed by junk is text
                continue;
            }
            flush_text(i);
            auto name = lower(s.substr(name_start, j - name_start));
            auto end = s.find('>', j);
            i = end == std::string_view::npos ? s.size() : end + 1;
            text_start = i;
            builder.end(name);
            continue;
        }
        if (i + 1 >= s.size() || !std::isalpha(static_cast<unsigned char>(s[i + 1]))) {
            ++i;
            continue;
        }
        flush_text(i);
        std::size_t j = i + 1;
        std::size_t name_start = j;
        while (j < s.size() && is_name_char(s[j])) ++j;
        auto tag = lower(s.substr(name_start, j - name_start));
        std::vector<std::pair<std::string, std::string>> attrs;
        bool self_closing = false;
        while (j < s.size()) {
            skip_space(s, j);
            if (j >= s.size()) break;
            if (s[j] == '>') {
                ++j;
                break;
            }
            if (s[j] == '/') {
                self_closing = j + 1 < s.size() && s[j + 1] == '>';
                ++j;
                continue;
            }
            std::size_t an = j;
            while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '=' &&
                   s[j] != '>' && !(s[j] == '/' && j + 1 < s.size() && s[j + 1] == '>')) {
                ++j;
            }
            auto attr_name = lower(s.substr(an, j - an));
            if (attr_name.empty()) {
                ++j;
                continue;
            }
            skip_space(s, j);
            std::string value;
            if (j < s.size() && s[j] == '=') {
                ++j;
                skip_space(s, j);
                if (j < s.size() && (s[j] == '"' || s[j] == '\'')) {
                    char q = s[j++];
                    auto close = s.find(q, j);
                    if (close == std::string_view::npos) close = s.size();
                    value = decode_entities(s.substr(j, close - j));
                    j = std::min(s.size(), close + 1);
                } else {
                    std::size_t vs = j;
                    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '>') ++j;
                    value = decode_entities(s.substr(vs, j - vs));
                }
            }
            bool duplicate = std::any_of(attrs.begin(), attrs.end(),
                                         [&](const auto& a) { return a.first == attr_name; });
            if (!duplicate) attrs.emplace_back(std::move(attr_name), std::move(value));
        }
        i = j;
        text_start = i;
        builder.start(tag, std::move(attrs), self_closing);
        if (is_raw_text(tag) && !self_closing) {
            // raw text runs to the matching close tag, case-insensitively
            std::string needle = "</" + tag;
            std::size_t k = i;
            std::size_t close = s.size();
            while (k < s.size()) {
                auto lt = s.find("</", k);
                if (lt == std::string_view::npos) break;
                if (lower(s.substr(lt, needle.size())) == needle) {
                    close = lt;
                    break;
                }
                k = lt + 2;
            }
            builder.text(s.substr(i, close - i), tag == "title" || tag == "textarea");
            builder.end(tag);
            auto gt = s.find('>', close);
            i = close == s.size() || gt == std::string_view::npos ? s.size() : gt + 1;
            text_start = i;
        }
    }
    flush_text(s.size());
    return Document(builder.finish());
}

const Node* Document::find_first(std::string_view tag) const {
    std::vector<const Node*> todo{root_.get()};
    while (!todo.empty()) {
        const Node* n = todo.back();
        todo.pop_back();
        if (n->is_element(tag)) return n;
        for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) todo.push_back(it->get());
    }
    return nullptr;
}

std::string text_content(const Node& node) {
    if (node.kind == Node::Kind::Text) return node.text;
    std::string out;
    for (const auto& child : node.children) {
        if (child->kind == Node::Kind::Comment) continue;
        out += text_content(*child);
    }
    return out;
}

// ---------------------------------------------------------------- selectors

namespace {

class SelectorParser {
public:
    explicit SelectorParser(std::string_view s) : s_(s) {}

    std::vector<Selector::Complex> parse_list() {
        std::vector<Selector::Complex> out;
        while (true) {
            skip_space(s_, i_);
            if (i_ >= s_.size()) break;
            out.push_back(parse_complex());
            skip_space(s_, i_);
            if (i_ < s_.size()) {
                if (s_[i_] != ',') fail("expected ','");
                ++i_;
            }
        }
        return out;
    }

private:
    [[noreturn]] void fail(const char* what) const {
        throw std::invalid_argument(std::string("bad selector '") + std::string(s_) + "': " + what);
    }

    Selector::Complex parse_complex() {
        Selector::Complex left_to_right;
        std::vector<bool> child_combinator;
        left_to_right.push_back(parse_compound());
        while (true) {
            std::size_t save = i_;
            skip_space(s_, i_);
            if (i_ >= s_.size() || s_[i_] == ',') break;
            bool child = false;
            if (s_[i_] == '>') {
                child = true;
                ++i_;
                skip_space(s_, i_);
            } else if (i_ == save) {
                fail("unexpected character");
            }
            child_combinator.push_back(child);
            left_to_right.push_back(parse_compound());
        }
        // store right-to-left; child_of_next refers to the compound's left neighbour
        Selector::Complex rtl(left_to_right.rbegin(), left_to_right.rend());
        for (std::size_t k = 0; k + 1 < rtl.size(); ++k) {
            rtl[k].child_of_next = child_combinator[child_combinator.size() - 1 - k];
        }
        return rtl;
    }

    std::string ident() {
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-' ||
                                  s_[i_] == '_' || static_cast<unsigned char>(s_[i_]) >= 0x80)) {
            ++i_;
        }
        if (i_ == start) fail("expected identifier");
        return std::string(s_.substr(start, i_ - start));
    }

    Selector::Compound parse_compound() {
        Selector::Compound c;
        bool any = false;
        if (i_ < s_.size() && s_[i_] == '*') {
            c.tag = "*";
            ++i_;
            any = true;
        } else if (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) {
            c.tag = lower(ident());
            any = true;
        }
        while (i_ < s_.size()) {
            char ch = s_[i_];
            if (ch == '#') {
                ++i_;
                c.attrs.push_back({"id", Selector::AttrTest::Op::Equals, ident()});
            } else if (ch == '.') {
                ++i_;
                c.attrs.push_back({"class", Selector::AttrTest::Op::Word, ident()});
            } else if (ch == '[') {
                ++i_;
                skip_space(s_, i_);
                Selector::AttrTest t;
                t.name = lower(ident());
                skip_space(s_, i_);
                if (i_ < s_.size() && s_[i_] != ']') {
                    using Op = Selector::AttrTest::Op;
                    char op = s_[i_];
                    if (op == '=') {
                        t.op = Op::Equals;
                        ++i_;
                    } else {
                        if (i_ + 1 >= s_.size() || s_[i_ + 1] != '=') fail("bad attribute operator");
                        switch (op) {
                            case '~': t.op = Op::Word; break;
                            case '^': t.op = Op::Prefix; break;
                            case '$': t.op = Op::Suffix; break;
                            case '*': t.op = Op::Contains; break;
                            case '|': t.op = Op::Dash; break;
                            default: fail("bad attribute operator");
                        }
                        i_ += 2;
                    }
                    skip_space(s_, i_);
                    if (i_ < s_.size() && (s_[i_] == '"' || s_[i_] == '\'')) {
                        char q = s_[i_++];
                        auto close = s_.find(q, i_);
                        if (close == std::string_view::npos) fail("unterminated string");
                        t.value = std::string(s_.substr(i_, close - i_));
                        i_ = close + 1;
                    } else {
                        t.value = ident();
                    }
                    skip_space(s_, i_);
                }
                if (i_ >= s_.size() || s_[i_] != ']') fail("expected ']'");
                ++i_;
                c.attrs.push_back(std::move(t));
            } else {
                break;
            }
            any = true;
        }
        if (!any) fail("empty compound selector");
        return c;
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

bool match_attr(const Node& node, const Selector::AttrTest& t) {
    using Op = Selector::AttrTest::Op;
    if (t.op == Op::Word && t.name == "class") return node.has_class(t.value);
    const auto* v = node.attr(t.name);
    if (!v) return false;
    std::string_view val = *v;
    switch (t.op) {
        case Op::Exists: return true;
        case Op::Equals: return val == t.value;
        case Op::Prefix: return !t.value.empty() && val.substr(0, t.value.size()) == t.value;
        case Op::Suffix:
            return !t.value.empty() && val.size() >= t.value.size() &&
                   val.substr(val.size() - t.value.size()) == t.value;
        case Op::Contains: return !t.value.empty() && val.find(t.value) != std::string_view::npos;
        case Op::Dash:
            return val == t.value || (val.size() > t.value.size() && val.substr(0, t.value.size()) == t.value &&
                                      val[t.value.size()] == '-');
        case Op::Word: {
            Node tmp;
            tmp.attrs.emplace_back("class", *v);
            return tmp.has_class(t.value);
        }
    }
    return false;
}

bool match_compound(const Node& node, const Selector::Compound& c) {
    if (!node.is_element()) return false;
    if (!c.tag.empty() && c.tag != "*" && c.tag != node.tag) return false;
    return std::all_of(c.attrs.begin(), c.attrs.end(), [&](const auto& t) { return match_attr(node, t); });
}

bool match_from(const Node& node, const Selector::Complex& cx, std::size_t k) {
    if (!match_compound(node, cx[k])) return false;
    if (k + 1 == cx.size()) return true;
    if (cx[k].child_of_next) {
        return node.parent && match_from(*node.parent, cx, k + 1);
    }
    for (const Node* p = node.parent; p; p = p->parent) {
        if (match_from(*p, cx, k + 1)) return true;
    }
    return false;
}

void collect(const Node& node, const Selector& sel, std::vector<const Node*>& out) {
    if (sel.matches(node)) out.push_back(&node);
    for (const auto& child : node.children) collect(*child, sel, out);
}

}  // namespace

Selector Selector::parse(std::string_view text) {
    Selector sel;
    sel.source_ = std::string(text);
    sel.alternatives_ = SelectorParser(text).parse_list();
    return sel;
}

bool Selector::matches(const Node& node) const {
    return std::any_of(alternatives_.begin(), alternatives_.end(),
                       [&](const Complex& cx) { return match_from(node, cx, 0); });
}

std::vector<const Node*> select(const Node& root, const Selector& selector) {
    std::vector<const Node*> out;
    if (!selector.empty()) collect(root, selector, out);
    return out;
}

bool within(const Node& node, const Selector& selector) {
    if (selector.empty()) return false;
    for (const Node* n = &node; n; n = n->parent) {
        if (selector.matches(*n)) return true;
    }
    return false;
}

}  // namespace wpf::html
