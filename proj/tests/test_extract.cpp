#include <doctest.h>

#include "support/builders.hpp"
#include "wpf/corpus.hpp"
#include "wpf/extract.hpp"
#include "wpf/url.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

using namespace wpf;
using wpf::testing::make_article;

namespace fs = std::filesystem;

namespace {

const fs::path kMaternity = fs::path(WPF_TEST_DATA) / "extract" / "maternity_article";
const fs::path kConfig = fs::path(WPF_TEST_DATA) / ".." / ".." / "data" / "extraction.conf";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SiteExtractionConfig wof_config() { return load_extraction_config(kConfig).at("wof"); }

SiteMeta maternity_meta() {
    SiteMeta m;
    m.users = read_name_map(slurp(kMaternity / "users.json"));
    m.categories = read_name_map(slurp(kMaternity / "categories.json"));
    m.tags = read_name_map(slurp(kMaternity / "tags.json"));
    return m;
}

RawPost simple_post(std::string content, std::string link = "https://site.example/news/item/") {
    RawPost p;
    p.id = 1;
    p.date_gmt = parse_timestamp("2022-03-01T10:00:00");
    p.modified_gmt = p.date_gmt;
    p.link = std::move(link);
    p.title_html = "Item";
    p.content_html = std::move(content);
    return p;
}

SiteExtractionConfig plain_config() {
    SiteExtractionConfig c;
    c.id = "site";
    c.picker_links = "nav.picker a";
    return c;
}

std::set<std::string> languages(const std::vector<TranslationRef>& refs) {
    std::set<std::string> out;
    for (const auto& r : refs) out.insert(r.language);
    return out;
}

Article linked(std::string site, PostId id, std::string lang, std::vector<std::pair<std::string, std::string>> refs) {
    auto a = make_article(std::move(site), id, std::move(lang), "2022-03-01T10:00:00", "body");
    for (auto& [l, url] : refs) a.translation_refs.push_back({l, url});
    return a;
}

/// Components by breadth-first search over an explicit adjacency matrix.
std::vector<std::set<ArticleKey>> bfs_components(const std::vector<Article>& articles) {
    std::size_t n = articles.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& r : articles[i].translation_refs) {
            for (std::size_t j = 0; j < n; ++j) {
                if (articles[j].url == r.url) adj[i][j] = adj[j][i] = true;
            }
        }
    }
    std::vector<bool> seen(n, false);
    std::vector<std::set<ArticleKey>> out;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::set<ArticleKey> comp;
        std::queue<std::size_t> q;
        q.push(s);
        seen[s] = true;
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            comp.insert(articles[u].key());
            for (std::size_t v = 0; v < n; ++v) {
                if (adj[u][v] && !seen[v]) {
                    seen[v] = true;
                    q.push(v);
                }
            }
        }
        out.push_back(comp);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::set<ArticleKey>> group_sets(const GroupResolution& r) {
    std::vector<std::set<ArticleKey>> out;
    for (const auto& g : r.groups) out.emplace_back(g.article_keys.begin(), g.article_keys.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("maternity hospital article extracts to the golden record") {
    auto raw = parse_raw_post(slurp(kMaternity / "post.json"));
    auto r = extract_article(raw, slurp(kMaternity / "page.html"), wof_config(), maternity_meta());
    const Article& a = r.article;

    CHECK(r.warnings.empty());
    CHECK(a.title == "Fake: Russian aircraft attacked a maternity hospital with mothers and children inside");
    REQUIRE_FALSE(a.paragraphs.empty());
    CHECK(a.paragraphs.front().starts_with("What is fake about:"));
    CHECK(a.paragraphs[2] == "The fact");
    CHECK(a.text.find("«an atrocity»") != std::string::npos);
    CHECK(a.language == "en");
    CHECK(a.translation_refs.size() == 5);
    CHECK(languages(a.translation_refs) == std::set<std::string>{"ar", "de", "es", "fr", "zh"});
    CHECK(a.text.find("Photo: social networks") == std::string::npos);
    CHECK(a.text.find("Source: Instagram") == std::string::npos);
    CHECK(a.text.find("Share") == std::string::npos);
    CHECK(a.text.find("wofViews") == std::string::npos);
    REQUIRE(a.links.size() == 1);
    CHECK(a.links[0] == Link{"Instagram account", "https://www.instagram.com/"});
    CHECK(a.image_urls == std::vector<std::string>{
                              "https://waronfakes.com/wp-content/uploads/2022/03/maternity-1024x576.jpg",
                              "https://waronfakes.com/wp-content/uploads/2022/03/marianna.jpg"});
    CHECK(a.date_msk == to_moscow(a.date_gmt));
    CHECK(a.author_name == "War on fakes");
    CHECK(a.categories == std::vector<std::string>{"Civil"});
    CHECK(a.tags == std::vector<std::string>{"Mariupol", "maternity hospital"});

    auto json = article_to_json(a, 2) + "\n";
    auto golden_path = kMaternity / "golden.json";
    if (std::getenv("WPF_WRITE_GOLDEN")) {
        std::ofstream(golden_path, std::ios::binary) << json;
    }
    CHECK(json == slurp(golden_path));
    CHECK(article_from_json(json) == a);
}

TEST_CASE("caption-only content yields no paragraphs") {
    auto r = extract_article(simple_post("<figcaption>Photo: archive</figcaption>"), "", plain_config());
    CHECK(r.article.paragraphs.empty());
    CHECK(r.article.text.empty());
    CHECK(std::count(r.warnings.begin(), r.warnings.end(), "empty content") == 1);

    auto fig = extract_article(
        simple_post("<figure><img src=\"/a.jpg\"><figcaption>Photo: archive</figcaption></figure>"), "",
        plain_config());
    CHECK(fig.article.paragraphs.empty());
    CHECK(fig.article.image_urls == std::vector<std::string>{"https://site.example/a.jpg"});
}

TEST_CASE("two paragraphs, a caption and an inline link") {
    auto r = extract_article(
        simple_post("<p>First <em>claim</em> here.</p>"
                    "<div class=\"wp-caption\"><img src=\"x.jpg\"><p class=\"wp-caption-text\">Credit: AP</p></div>"
                    "<p>Second with <a href=\"../other/\">a  link</a>.</p>"),
        "", plain_config());
    CHECK(r.article.paragraphs == std::vector<std::string>{"First claim here.", "Second with a link."});
    REQUIRE(r.article.links.size() == 1);
    CHECK(r.article.links[0] == Link{"a link", "https://site.example/news/other/"});
    CHECK(r.article.image_urls == std::vector<std::string>{"https://site.example/news/item/x.jpg"});
}

TEST_CASE("paragraph boundaries") {
    auto cfg = plain_config();
    CHECK(extract_paragraphs("<p>a<br>b</p>", cfg) == std::vector<std::string>{"a", "b"});
    CHECK(extract_paragraphs("loose <b>text</b><p>para</p>tail", cfg) ==
          std::vector<std::string>{"loose text", "para", "tail"});
    CHECK(extract_paragraphs("<ul><li>one</li><li>two</li></ul>", cfg) == std::vector<std::string>{"one", "two"});
    CHECK(extract_paragraphs("<p>  spaced \n\t out&nbsp; </p><p> </p>", cfg) == std::vector<std::string>{"spaced out"});
    CHECK(extract_paragraphs("<p>x<script>var y = '<p>';</script>z</p>", cfg) == std::vector<std::string>{"xz"});
    CHECK(extract_paragraphs("<p>unclosed <b>markup<p>next", cfg) == std::vector<std::string>{"unclosed markup", "next"});
    cfg.body_root = ".entry";
    CHECK(extract_paragraphs("<p>outside</p><div class=\"entry\"><p>inside</p></div>", cfg) ==
          std::vector<std::string>{"inside"});
}

TEST_CASE("body root missing is reported") {
    auto cfg = plain_config();
    cfg.body_root = ".entry-content";
    auto r = extract_article(simple_post("<p>text</p>"), "", cfg);
    CHECK(r.article.paragraphs.empty());
    CHECK(std::count(r.warnings.begin(), r.warnings.end(), "body root '.entry-content' not found") == 1);
    CHECK(std::count(r.warnings.begin(), r.warnings.end(), "empty content") == 1);
}

TEST_CASE("language from the URL path") {
    auto cfg = plain_config();
    CHECK(extract_article(simple_post("<p>x</p>", "https://s.example/fr/a/"), "", cfg).article.language == "fr");
    CHECK(extract_article(simple_post("<p>x</p>", "https://s.example/zh-hans/a/"), "", cfg).article.language == "zh");
    CHECK(extract_article(simple_post("<p>x</p>", "https://s.example/civil/a/"), "", cfg).article.language == "en");
    cfg.default_language = "de";
    CHECK(extract_article(simple_post("<p>x</p>", "https://s.example/a/"), "", cfg).article.language == "de");
}

TEST_CASE("extract_translations") {
    auto cfg = plain_config();
    SUBCASE("no picker") {
        auto t = extract_translations("<html><body><p>none</p></body></html>", cfg);
        CHECK(t.refs.empty());
        CHECK(t.warnings.empty());
    }
    SUBCASE("maternity hospital page") {
        auto t = extract_translations(slurp(kMaternity / "page.html"), wof_config());
        CHECK(t.refs.size() == 5);
        CHECK(t.warnings.empty());
        CHECK(languages(t.refs) == std::set<std::string>{"ar", "de", "es", "fr", "zh"});
    }
    SUBCASE("duplicate language keeps the first") {
        auto t = extract_translations("<html lang=\"en\"><nav class=\"picker\">"
                                      "<a hreflang=\"fr\" href=\"/fr/one/\">FR</a>"
                                      "<a hreflang=\"fr\" href=\"/fr/two/\">FR</a>"
                                      "<a hreflang=\"es\" href=\"/es/one/\">ES</a></nav></html>",
                                      cfg);
        REQUIRE(t.refs.size() == 2);
        CHECK(t.refs[0] == TranslationRef{"fr", "/fr/one/"});
        CHECK(t.refs[1] == TranslationRef{"es", "/es/one/"});
        CHECK(t.warnings.size() == 1);
    }
    SUBCASE("unknown language is skipped with a warning") {
        auto t = extract_translations("<nav class=\"picker\"><a hreflang=\"ru\" href=\"/ru/a/\">RU</a>"
                                      "<a hreflang=\"de\" href=\"/de/a/\">DE</a></nav>",
                                      cfg, "en");
        CHECK(t.refs == std::vector<TranslationRef>{{"de", "/de/a/"}});
        CHECK(t.warnings.size() == 1);
    }
    SUBCASE("self language from html lang, current item, or argument") {
        std::string page = "<html lang=\"fr-FR\"><nav class=\"picker\"><a hreflang=\"fr\" href=\"/fr/a/\">FR</a>"
                           "<a class=\"cur\" hreflang=\"de\" href=\"/de/a/\">DE</a></nav></html>";
        CHECK(extract_translations(page, cfg).refs == std::vector<TranslationRef>{{"de", "/de/a/"}});
        cfg.picker_current = ".cur";
        CHECK(extract_translations(page, cfg).refs == std::vector<TranslationRef>{{"fr", "/fr/a/"}});
        CHECK(extract_translations(page, cfg, "es").refs.size() == 2);
    }
    SUBCASE("language from the link path when the attribute is missing") {
        auto t = extract_translations("<nav class=\"picker\"><a href=\"https://s.example/it/x/\">IT</a></nav>", cfg, "en");
        CHECK(t.refs == std::vector<TranslationRef>{{"it", "https://s.example/it/x/"}});
    }
}

TEST_CASE("translation refs resolve against the post link") {
    auto r = extract_article(simple_post("<p>x</p>"),
                             "<nav class=\"picker\"><a hreflang=\"fr\" href=\"/fr/news/item/\">FR</a></nav>",
                             plain_config());
    CHECK(r.article.translation_refs == std::vector<TranslationRef>{{"fr", "https://site.example/fr/news/item/"}});
}

TEST_CASE("page decoding") {
    std::string cp1251 = "<html><head><meta charset=\"windows-1251\"></head><body>"
                         "<nav class=\"picker\"><a hreflang=\"de\" href=\"/de/\">\xcd\xe5\xec\xe5\xf6\xea\xe8\xe9</a></nav>"
                         "</body></html>";
    CHECK(sniff_charset(cp1251) == "windows-1251");
    auto decoded = decode_page(cp1251, "windows-1251");
    CHECK(decoded.find("Немецкий") != std::string::npos);
    CHECK(sniff_charset("<meta http-equiv=\"Content-Type\" content=\"text/html; charset=ISO-8859-1\">") ==
          "iso-8859-1");
    CHECK_FALSE(sniff_charset("<p>no meta</p>").has_value());

    auto r = extract_article(simple_post("<p>x</p>"), cp1251, plain_config());
    CHECK(r.article.translation_refs.size() == 1);
    CHECK(std::none_of(r.warnings.begin(), r.warnings.end(),
                       [](const std::string& w) { return w.find("undecodable") != std::string::npos; }));

    std::size_t replaced = 0;
    auto bad = decode_page("ok \xff\xfe end", "utf-8", &replaced);
    CHECK(replaced == 2);
    CHECK(bad == "ok \xEF\xBF\xBD\xEF\xBF\xBD end");

    auto broken = extract_article(simple_post("<p>x</p>"), "<nav class=\"picker\">\xff</nav>", plain_config());
    CHECK(std::count_if(broken.warnings.begin(), broken.warnings.end(), [](const std::string& w) {
              return w.find("undecodable") != std::string::npos;
          }) == 1);

    auto unknown = extract_article(simple_post("<p>x</p>"), "<p>x</p>", plain_config(), {}, "no-such-charset");
    CHECK(std::any_of(unknown.warnings.begin(), unknown.warnings.end(),
                      [](const std::string& w) { return w.find("unknown charset") != std::string::npos; }));
    CHECK_THROWS_AS(decode_page("x", "no-such-charset"), std::invalid_argument);
}

TEST_CASE("invalid UTF-8 in the payload is replaced with a warning") {
    auto post = simple_post("<p>caf\xe9</p>");
    auto r = extract_article(post, "", plain_config());
    CHECK(r.article.paragraphs == std::vector<std::string>{"caf\xEF\xBF\xBD"});
    CHECK(std::count(r.warnings.begin(), r.warnings.end(), "invalid UTF-8 in content replaced") == 1);
}

TEST_CASE("metadata names and unknown ids") {
    SiteMeta meta;
    meta.users[5] = "Editor";
    meta.categories[1] = "News";
    auto post = simple_post("<p>x</p>");
    post.author = 5;
    post.categories = {1, 2};
    post.tags = {9};
    auto r = extract_article(post, "", plain_config(), meta);
    CHECK(r.article.author_name == "Editor");
    CHECK(r.article.categories == std::vector<std::string>{"News"});
    CHECK(r.article.tags.empty());
    CHECK(r.warnings == std::vector<std::string>{"unknown category id 2", "unknown tag id 9"});
}

TEST_CASE("re-extracting rendered output adds no warnings") {
    auto raw = parse_raw_post(slurp(kMaternity / "post.json"));
    auto cfg = plain_config();
    cfg.picker_links = "nav.language-picker a[hreflang]";
    auto first = extract_article(raw, slurp(kMaternity / "page.html"), wof_config(), maternity_meta());
    auto rendered = render_article(first.article);
    rendered.raw.author = raw.author;
    rendered.raw.categories = raw.categories;
    rendered.raw.tags = raw.tags;
    auto second = extract_article(rendered.raw, rendered.page_html, cfg, maternity_meta());
    CHECK(second.warnings.size() <= first.warnings.size());
    for (const auto& w : second.warnings) {
        CHECK(std::find(first.warnings.begin(), first.warnings.end(), w) != first.warnings.end());
    }
    CHECK(second.article.paragraphs == first.article.paragraphs);
    CHECK(second.article.title == first.article.title);
    CHECK(second.article.links == first.article.links);
    CHECK(second.article.image_urls == first.article.image_urls);
    CHECK(second.article.translation_refs == first.article.translation_refs);

    std::mt19937 rng(7);
    const char* words[] = {"fake", "claim", "«quoted»", "<b>", "&amp;", "Мариуполь", "x", "\"q\""};
    for (int trial = 0; trial < 100; ++trial) {
        Article a = make_article("site", trial + 1, "en", "2022-03-01T10:00:00", "");
        a.paragraphs.clear();
        int np = static_cast<int>(rng() % 4);
        for (int p = 0; p < np; ++p) {
            std::string para;
            int nw = 1 + static_cast<int>(rng() % 6);
            for (int w = 0; w < nw; ++w) para += (w ? " " : "") + std::string(words[rng() % 8]);
            a.paragraphs.push_back(para);
        }
        a.text = join_paragraphs(a.paragraphs);
        auto once = extract_article(render_article(a).raw, render_article(a).page_html, cfg);
        auto twice = extract_article(render_article(once.article).raw, render_article(once.article).page_html, cfg);
        CHECK(once.article.paragraphs == a.paragraphs);
        CHECK(twice.warnings.size() <= once.warnings.size());
    }
}

TEST_CASE("extraction config") {
    auto all = load_extraction_config(kConfig);
    CHECK(all.size() == 2);
    CHECK(all.at("rrn").picker_language_attr == "lang");
    CHECK(all.at("wof").id == "wof");

    auto parse = [](const std::string& s) {
        std::istringstream in(s);
        return read_extraction_config(in);
    };
    auto cfg = parse("# comment\n[a]\n; other\ndefault_language = fr\nbody_exclude = .x, .y\n");
    CHECK(cfg.at("a").default_language == "fr");
    CHECK(cfg.at("a").body_exclude == ".x, .y");
    CHECK(cfg.at("a").picker_links.empty());

    auto error_line = [&](const std::string& s) -> std::size_t {
        try {
            parse(s);
        } catch (const ConfigError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(error_line("key = v\n") == 1);
    CHECK(error_line("[a]\nnope = 1\n") == 2);
    CHECK(error_line("[a]\n\ndefault_language = ru\n") == 3);
    CHECK(error_line("[a]\n[a]\n") == 2);
    CHECK(error_line("[a\n") == 1);
    CHECK(error_line("[a]\njust text\n") == 2);
    CHECK(error_line("[a]\nbody_exclude = [unclosed\n") == 2);
}

TEST_CASE("raw posts") {
    auto bytes = slurp(kMaternity / "post.json");
    auto p = parse_raw_post(bytes);
    CHECK(p.id == 4213);
    CHECK(p.raw_json == bytes);
    CHECK(p.author == 3);
    CHECK(p.categories == std::vector<std::int64_t>{7});
    CHECK(p.tags == std::vector<std::int64_t>{21, 34});
    CHECK(format_utc(p.date_gmt) == "2022-03-11T09:14:27Z");
    CHECK(p.slug == "fake-russian-aviation-struck-a-maternity-hospital-with-mothers-and-children");

    CHECK_THROWS_AS(parse_raw_post("{"), RawPostError);
    CHECK_THROWS_AS(parse_raw_post(R"({"id":0,"date_gmt":"2022-01-01T00:00:00","modified_gmt":"2022-01-01T00:00:00",
        "link":"https://a/","title":{"rendered":""},"content":{"rendered":""}})"),
                    RawPostError);
    CHECK_THROWS_AS(parse_raw_post(R"({"id":1,"date_gmt":"bad","modified_gmt":"2022-01-01T00:00:00",
        "link":"https://a/","title":{"rendered":""},"content":{"rendered":""}})"),
                    RawPostError);
    CHECK_THROWS_AS(parse_raw_post(R"({"id":1})"), RawPostError);
}

TEST_CASE("split_json_array keeps element bytes") {
    std::string a = R"({"id":1,"s":"a],[b\"}"})";
    std::string b = "{\"id\":2,\"n\":[1, {\"x\": \"}\"}]}";
    std::string doc = "[" + a + " ,\n  " + b + "\n]\n";
    auto parts = split_json_array(doc);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == a);
    CHECK(parts[1] == b);
    CHECK(split_json_array(" [ ] ").empty());
    CHECK_THROWS_AS(split_json_array("{}"), RawPostError);
    CHECK_THROWS_AS(split_json_array("[1,"), RawPostError);
    CHECK_THROWS_AS(split_json_array("[1,,2]"), RawPostError);
    CHECK_THROWS_AS(split_json_array("[\"open]"), RawPostError);
    CHECK_THROWS_AS(split_json_array("[1] x"), RawPostError);

    std::mt19937 rng(3);
    for (int t = 0; t < 50; ++t) {
        nlohmann::json arr = nlohmann::json::array();
        int n = static_cast<int>(rng() % 5);
        for (int i = 0; i < n; ++i) {
            arr.push_back({{"id", i}, {"t", std::string(rng() % 4, "[]{},\"\\"[rng() % 7])}});
        }
        auto text = arr.dump(static_cast<int>(rng() % 3) - 1);
        auto split = split_json_array(text);
        REQUIRE(split.size() == arr.size());
        for (std::size_t i = 0; i < split.size(); ++i) CHECK(nlohmann::json::parse(split[i]) == arr[i]);
    }
}

TEST_CASE("urls") {
    CHECK(resolve_url("https://a.example/x/y/z", "../q") == "https://a.example/x/q");
    CHECK(resolve_url("https://a.example/x/y/z", "/r?s=1") == "https://a.example/r?s=1");
    CHECK(resolve_url("https://a.example/x/", "//cdn.example/i.jpg") == "https://cdn.example/i.jpg");
    CHECK(resolve_url("https://a.example/x/", "http://b.example/") == "http://b.example/");
    CHECK(resolve_url("https://a.example/x/?p=1", "#top") == "https://a.example/x/?p=1#top");
    CHECK(resolve_url("https://a.example/x/", "./y/./z") == "https://a.example/x/y/z");
    CHECK(normalize_url("HTTPS://A.Example:443/fr/x/#frag") == "https://a.example/fr/x");
    CHECK(normalize_url("https://a.example/") == "https://a.example");
    CHECK(normalize_url("http://a.example:8080/p") == "http://a.example:8080/p");
    CHECK_FALSE(parse_url("ftp://a/").has_value());
    CHECK_FALSE(parse_url("/relative").has_value());
    CHECK(path_language("https://a.example/ar/x/") == "ar");
    CHECK(path_language("/de/") == "de");
    CHECK_FALSE(path_language("https://a.example/ru/x/").has_value());
    CHECK_FALSE(path_language("https://a.example/").has_value());
}

TEST_CASE("translation groups") {
    SUBCASE("three articles referencing each other") {
        auto en = linked("s", 1, "en", {});
        auto fr = linked("s", 2, "fr", {});
        auto de = linked("s", 3, "de", {});
        en.translation_refs = {{"fr", fr.url}};
        fr.translation_refs = {{"de", de.url}};
        de.translation_refs = {{"en", en.url}};
        auto r = resolve_translation_groups({de, en, fr});
        REQUIRE(r.groups.size() == 1);
        CHECK(r.groups[0].article_keys.size() == 3);
        CHECK(r.groups[0].language_count() == 3);
        CHECK(r.groups[0].members.at("fr") == fr.key());
        CHECK_FALSE(r.groups[0].orphaned);
        CHECK(r.reports.empty());
    }
    SUBCASE("article without refs is an orphan") {
        auto r = resolve_translation_groups({linked("s", 1, "en", {})});
        REQUIRE(r.groups.size() == 1);
        CHECK(r.groups[0].orphaned);
    }
    SUBCASE("dangling reference") {
        auto en = linked("s", 1, "en", {});
        auto fr = linked("s", 2, "fr", {{"de", "https://s.example/de/missing/"}});
        en.translation_refs = {{"fr", fr.url}};
        auto r = resolve_translation_groups({en, fr});
        REQUIRE(r.groups.size() == 1);
        CHECK(r.groups[0].members.size() == 2);
        REQUIRE(r.reports.size() == 1);
        CHECK(r.reports[0].kind == ConflictReport::Kind::DanglingRef);
        CHECK(r.reports[0].url == "https://s.example/de/missing/");
        CHECK(r.reports[0].articles == std::vector<ArticleKey>{fr.key()});
    }
    SUBCASE("same language twice in a component") {
        auto en = linked("s", 1, "en", {});
        auto fr_a = linked("s", 7, "fr", {});
        auto fr_b = linked("s", 4, "fr", {});
        fr_b.url = "https://s.example/fr/post-4-copy/";
        en.translation_refs = {{"fr", fr_a.url}, {"fr", fr_b.url}};
        auto r = resolve_translation_groups({en, fr_a, fr_b});
        REQUIRE(r.groups.size() == 1);
        CHECK(r.groups[0].members.at("fr") == fr_b.key());
        REQUIRE(r.reports.size() == 1);
        CHECK(r.reports[0].kind == ConflictReport::Kind::SameLanguage);
        CHECK(r.reports[0].articles == std::vector<ArticleKey>{fr_b.key(), fr_a.key()});
    }
    SUBCASE("urls match after normalization") {
        auto en = linked("s", 1, "en", {});
        auto fr = linked("s", 2, "fr", {});
        en.translation_refs = {{"fr", "HTTPS://S.example/fr/post-2#top"}};
        auto r = resolve_translation_groups({en, fr});
        CHECK(r.groups.size() == 1);
        CHECK(r.reports.empty());
    }
    SUBCASE("duplicate urls are rejected") {
        auto a = linked("s", 1, "en", {});
        auto b = linked("s", 2, "en", {});
        b.url = a.url;
        CHECK_THROWS_AS(resolve_translation_groups({a, b}), std::invalid_argument);
    }
}

TEST_CASE("translation groups match brute-force components and ignore edge direction") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + static_cast<int>(rng() % 15);
        std::vector<Article> arts;
        for (int i = 0; i < n; ++i) {
            arts.push_back(linked("s", i + 1, std::string(kLanguages[rng() % kLanguages.size()]), {}));
        }
        int edges = static_cast<int>(rng() % (n + 2));
        std::vector<std::pair<int, int>> es;
        for (int e = 0; e < edges; ++e) {
            int x = static_cast<int>(rng() % n), y = static_cast<int>(rng() % n);
            if (x == y) continue;
            es.push_back({x, y});
            arts[x].translation_refs.push_back({arts[y].language, arts[y].url});
        }
        auto r = resolve_translation_groups(arts);
        CHECK(group_sets(r) == bfs_components(arts));

        std::size_t covered = 0;
        for (const auto& g : r.groups) {
            covered += g.article_keys.size();
            CHECK(g.orphaned == (g.article_keys.size() == 1));
            CHECK_FALSE(g.members.empty());
        }
        CHECK(covered == arts.size());

        auto reversed = arts;
        for (auto& a : reversed) a.translation_refs.clear();
        for (auto [x, y] : es) reversed[y].translation_refs.push_back({arts[x].language, arts[x].url});
        auto rr = resolve_translation_groups(reversed);
        CHECK(group_sets(rr) == group_sets(r));
        REQUIRE(rr.groups.size() == r.groups.size());
        for (std::size_t g = 0; g < r.groups.size(); ++g) CHECK(rr.groups[g].members == r.groups[g].members);
    }
}

TEST_CASE("snapshot extraction") {
    auto root = fs::temp_directory_path() / ("wpf_extract_" + std::to_string(std::random_device{}()));
    auto site = root / "wof";
    fs::create_directories(site / "posts");
    fs::create_directories(site / "pages");
    fs::create_directories(site / "meta");
    fs::copy_file(kMaternity / "post.json", site / "posts" / "4213.json");
    fs::copy_file(kMaternity / "page.html", site / "pages" / "4213.html");
    for (auto name : {"users.json", "categories.json", "tags.json"}) fs::copy_file(kMaternity / name, site / "meta" / name);
    std::ofstream(site / "posts" / "99.json") << "{not json";

    auto configs = load_extraction_config(kConfig);
    auto s = extract_snapshot(root, configs);
    REQUIRE(s.articles.size() == 1);
    CHECK(s.failed_posts == 1);
    CHECK(s.warnings.size() == 1);
    CHECK(article_to_json(s.articles[0], 2) + "\n" == slurp(kMaternity / "golden.json"));
    CHECK(extract_snapshot(site, configs).articles == s.articles);
    fs::remove_all(root);
    CHECK_THROWS(extract_snapshot(root, configs));
}
