#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

/// Tolerant HTML parsing and CSS-style selection, enough for config-driven
/// article extraction. Malformed markup never throws; stray end tags are
/// dropped and unclosed elements are closed at end of input.
namespace wpf::html {

struct Node {
    enum class Kind { Document, Element, Text, Comment };

    Kind kind = Kind::Element;
    std::string tag;  // lowercase, elements only
    std::vector<std::pair<std::string, std::string>> attrs;
    std::string text;  // entity-decoded, text nodes only
    Node* parent = nullptr;
    std::vector<std::unique_ptr<Node>> children;

    bool is_element() const { return kind == Kind::Element; }
    bool is_element(std::string_view name) const { return kind == Kind::Element && tag == name; }
    const std::string* attr(std::string_view name) const;
    bool has_class(std::string_view cls) const;
};

class Document {
public:
    explicit Document(std::unique_ptr<Node> root) : root_(std::move(root)) {}
    const Node& root() const { return *root_; }
    /// First element with the given tag, or nullptr.
    const Node* find_first(std::string_view tag) const;

private:
    std::unique_ptr<Node> root_;
};

Document parse(std::string_view html);

std::string decode_entities(std::string_view s);

/// Concatenated text of all descendant text nodes.
std::string text_content(const Node& node);

/// Compiled selector list. Supports type, `*`, `#id`, `.class`,
/// `[attr]`, `[attr=v]`, `[attr~=v]`, `[attr^=v]`, `[attr$=v]`, `[attr*=v]`,
/// `[attr|=v]`, descendant (space) and child (`>`) combinators, and `,` lists.
class Selector {
public:
    static Selector parse(std::string_view text);

    bool matches(const Node& node) const;
    bool empty() const { return alternatives_.empty(); }
    const std::string& source() const { return source_; }

    struct AttrTest {
        enum class Op { Exists, Equals, Word, Prefix, Suffix, Contains, Dash };
        std::string name;
        Op op = Op::Exists;
        std::string value;
    };
    struct Compound {
        std::string tag;  // empty or "*" for any
        std::vector<AttrTest> attrs;
        bool child_of_next = false;  // combinator to the compound on the left is '>'
    };
    // Compounds stored right-to-left.
    using Complex = std::vector<Compound>;

private:
    std::string source_;
    std::vector<Complex> alternatives_;
};

/// Matching elements in document order (the root itself included).
std::vector<const Node*> select(const Node& root, const Selector& selector);

/// True when `node` or one of its ancestors matches.
bool within(const Node& node, const Selector& selector);

}  // namespace wpf::html
