#include <doctest.h>

#include "wpf/html.hpp"

using namespace wpf::html;

TEST_CASE("entities decode to UTF-8") {
    CHECK(decode_entities("a &amp; b") == "a & b");
    CHECK(decode_entities("&#8220;x&#8221;") == "“x”");
    CHECK(decode_entities("&#x41;&eacute;&laquo;") == "Aé«");
    CHECK(decode_entities("&#150;") == "–");  // cp1252 remap
    CHECK(decode_entities("AT&T; &bogus; & ;") == "AT&T; &bogus; & ;");
}

TEST_CASE("tolerant tree building") {
    auto doc = parse("<div><p>one<p>two<ul><li>a<li>b</ul></div></span><p>three");
    auto ps = select(doc.root(), Selector::parse("p"));
    REQUIRE(ps.size() == 3);
    CHECK(text_content(*ps[0]) == "one");
    CHECK(text_content(*ps[1]) == "two");
    CHECK(text_content(*ps[2]) == "three");
    auto lis = select(doc.root(), Selector::parse("ul > li"));
    REQUIRE(lis.size() == 2);
    CHECK(text_content(*lis[1]) == "b");
}

TEST_CASE("raw text elements and comments are not markup") {
    auto doc = parse("<p>x<script>if (a < b) { '</p>' }</script>y<!-- <p>no</p> --></p>");
    auto ps = select(doc.root(), Selector::parse("p"));
    REQUIRE(ps.size() == 1);
    auto scripts = select(doc.root(), Selector::parse("script"));
    REQUIRE(scripts.size() == 1);
    CHECK(text_content(*scripts[0]) == "if (a < b) { '</p>' }");
}

TEST_CASE("malformed markup does not throw") {
    CHECK_NOTHROW(parse("<p class=\"unterminated><a href=x"));
    CHECK_NOTHROW(parse("<<<>>></></ ></a b=c d='e>"));
    CHECK_NOTHROW(parse(""));
    auto doc = parse("<a href=/x title='t'>k</a><img src=\"i.png\"/>");
    auto a = select(doc.root(), Selector::parse("a"));
    REQUIRE(a.size() == 1);
    CHECK(*a[0]->attr("href") == "/x");
    CHECK(*a[0]->attr("title") == "t");
    CHECK(select(doc.root(), Selector::parse("img[src$='.png']")).size() == 1);
}

TEST_CASE("selectors") {
    auto doc = parse(R"(<html lang="en-US"><body>
        <nav class="lang-switch top"><a hreflang="fr" href="/fr/x">FR</a><a class="current" hreflang="en" href="/x">EN</a></nav>
        <div id="main"><figure><img src="a.jpg"><figcaption class="wp-caption-text">cap</figcaption></figure>
        <p>body <a href="http://e.com">link</a></p></div></body></html>)");
    CHECK(select(doc.root(), Selector::parse(".lang-switch a")).size() == 2);
    CHECK(select(doc.root(), Selector::parse("nav.top > a[hreflang=fr]")).size() == 1);
    CHECK(select(doc.root(), Selector::parse("#main p a, figcaption")).size() == 2);
    CHECK(select(doc.root(), Selector::parse("html[lang|=en]")).size() == 1);
    CHECK(select(doc.root(), Selector::parse("[href^='http']")).size() == 1);
    auto cap = select(doc.root(), Selector::parse("figcaption"));
    REQUIRE(cap.size() == 1);
    CHECK(within(*cap[0]->children[0], Selector::parse("figure")));
    CHECK_THROWS_AS(Selector::parse("a[href"), std::invalid_argument);
    CHECK_THROWS_AS(Selector::parse(",,"), std::invalid_argument);
    CHECK_THROWS_AS(Selector::parse("a:hover"), std::invalid_argument);
}
