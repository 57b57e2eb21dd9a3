#include <doctest.h>

#include "wpf/lexicon.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace wpf;

namespace {

CompiledLexicon compile(const std::string& src) {
    std::istringstream is(src);
    return CompiledLexicon(read_sectioned_lexicon(is));
}

CompiledLexicon demo() { return CompiledLexicon(load_lexicon(std::string(WPF_TEST_DATA) + "/../../data/demo_lexicon.txt")); }

// Pearson correlation written out from covariances, independent of the
// library's accumulation order.
double direct_r(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double ex = 0, ey = 0, exy = 0, exx = 0, eyy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ex += x[i] / n;
        ey += y[i] / n;
        exy += x[i] * y[i] / n;
        exx += x[i] * x[i] / n;
        eyy += y[i] * y[i] / n;
    }
    return (exy - ex * ey) / std::sqrt((exx - ex * ex) * (eyy - ey * ey));
}

}  // namespace

TEST_CASE("scoring counts words per category") {
    auto lex = compile("[pos]\nhappy\n[neg]\nwar\nkill*\n");
    auto s = score_document({"happy", "war"}, lex);
    REQUIRE(s);
    CHECK(s->at("pos") == 50.0);
    CHECK(s->at("neg") == 50.0);
    CHECK(lex.match("killing") == std::vector<std::size_t>{1});
    CHECK(lex.match("kil").empty());
    CHECK(lex.match("warfare").empty());
    CHECK_FALSE(score_document({}, lex).has_value());
    CHECK(score_document({"x"}, compile("")).value().empty());
}

TEST_CASE("demo lexicon hand counts") {
    auto lex = demo();
    // 10 words: we support peace but they hate the war and killing
    auto tokens = word_tokens("We support peace, but they hate the war and killing.");
    REQUIRE(tokens.size() == 10);
    auto s = score_document(tokens, lex).value();
    CHECK(s.at("posemo") == doctest::Approx(20.0));   // support, peace
    CHECK(s.at("negemo") == doctest::Approx(30.0));   // hate, war, killing
    CHECK(s.at("anger") == doctest::Approx(20.0));    // hate, killing
    CHECK(s.at("affect") == doctest::Approx(50.0));   // union of the above
    CHECK(s.at("we") == doctest::Approx(10.0));
    CHECK(s.at("they") == doctest::Approx(10.0));
    CHECK(s.at("power") == doctest::Approx(0.0));
}

TEST_CASE("scores ignore token order and other categories") {
    auto lex = compile("[a]\nx*\n[b]\ny\n");
    auto lex2 = compile("[a]\nx*\n[b]\ny\n[c]\nz\nx\n");
    std::vector<std::string> doc = {"xa", "y", "q", "xb", "z"};
    auto s1 = score_document(doc, lex).value();
    std::reverse(doc.begin(), doc.end());
    auto s2 = score_document(doc, lex).value();
    CHECK(s1 == s2);
    auto s3 = score_document(doc, lex2).value();
    CHECK(s3.at("a") == s1.at("a"));
    CHECK(s3.at("b") == s1.at("b"));
}

TEST_CASE("lexicon format errors") {
    std::istringstream star("[a]\nab*c\n");
    CHECK_THROWS_AS(read_sectioned_lexicon(star), LexiconFormatError);
    std::istringstream orphan("word\n");
    CHECK_THROWS_AS(read_sectioned_lexicon(orphan), LexiconFormatError);
    std::istringstream empty("[a]\n[b]\nx\n");
    CHECK_THROWS_AS(read_sectioned_lexicon(empty), LexiconFormatError);
    std::istringstream upper("[a]\nNATO\n");
    CHECK(read_sectioned_lexicon(upper).patterns.at("a") == std::vector<std::string>{"nato"});
}

TEST_CASE("tab-separated dictionary layout") {
    std::istringstream dic("%\n1\tposemo\n2\tnegemo\n3\tunused\n%\nhappy\t1\nhate*\t2\nbittersweet\t1\t2\n");
    auto lex = read_dic_lexicon(dic);
    CHECK(lex.categories == std::vector<std::string>{"posemo", "negemo"});
    CompiledLexicon c(lex);
    auto s = score_document({"hated", "bittersweet", "happy", "meh"}, c).value();
    CHECK(s.at("posemo") == 50.0);
    CHECK(s.at("negemo") == 50.0);
    std::istringstream bad("%\n1\tposemo\n%\nhappy\t7\n");
    CHECK_THROWS_AS(read_dic_lexicon(bad), LexiconFormatError);
}

TEST_CASE("group means") {
    std::vector<DocumentScores> docs = {
        {{"rrn", 1}, "rrn", CategoryScores{{"anger", 2.0}}},
        {{"rrn", 2}, "rrn", CategoryScores{{"anger", 4.0}}},
        {{"wof", 1}, "wof", CategoryScores{{"anger", 1.0}}},
        {{"wof", 2}, "wof", std::nullopt},
    };
    auto m = group_means(docs);
    CHECK(m.at("rrn").at("anger") == 3.0);
    CHECK(m.at("wof").at("anger") == 1.0);
    CHECK(m.at("All").at("anger") == doctest::Approx(7.0 / 3.0));
}

TEST_CASE("site correlation basics") {
    std::vector<DocumentScores> docs;
    for (int i = 0; i < 4; ++i) docs.push_back({{"a", i}, "a", CategoryScores{{"c", 10.0}, {"flat", 5.0}}});
    for (int i = 0; i < 4; ++i) docs.push_back({{"b", i}, "b", CategoryScores{{"c", 0.0}, {"flat", 5.0}}});
    auto ra = site_correlation(docs, "a");
    CHECK(ra.at("c") == doctest::Approx(1.0));
    CHECK_FALSE(ra.contains("flat"));
    auto rb = site_correlation(docs, "b");
    CHECK(rb.at("c") == doctest::Approx(-1.0));
    CHECK(top_correlated(ra) == std::vector<std::pair<std::string, double>>{{"c", ra.at("c")}});
    CHECK(top_correlated(rb).empty());
}

TEST_CASE("complement and scale properties of the correlation") {
    std::mt19937 rng(4);
    std::normal_distribution<double> g(5.0, 2.0);
    std::vector<DocumentScores> docs;
    for (int i = 0; i < 60; ++i) {
        std::string site = i % 3 == 0 ? "a" : "b";
        docs.push_back({{site, i}, site, CategoryScores{{"x", std::abs(g(rng))}, {"y", std::abs(g(rng))}}});
    }
    auto ra = site_correlation(docs, "a");
    auto rb = site_correlation(docs, "b");
    for (const auto& [cat, r] : ra) CHECK(rb.at(cat) == doctest::Approx(-r).epsilon(1e-12));
    auto scaled = docs;
    for (auto& d : scaled) for (auto& [k, v] : *d.scores) v *= 7.5;
    auto rs = site_correlation(scaled, "a");
    for (const auto& [cat, r] : ra) CHECK(rs.at(cat) == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("planted point-biserial correlation is recovered") {
    // 200 documents of 100 words each; the number of category words is a
    // target value with in-sample correlation 0.5 to site membership,
    // rounded to whole words.
    const std::size_t n = 200;
    std::mt19937_64 rng(2023);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> x(n), e(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = i < n / 2 ? 1.0 : 0.0;
    for (auto& v : e) v = g(rng);
    // remove the component of e along the centered indicator
    double mx = 0.5, me = 0;
    for (double v : e) me += v / static_cast<double>(n);
    double sxe = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxe += (x[i] - mx) * (e[i] - me);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    double see = 0;
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = e[i] - me - sxe / sxx * (x[i] - mx);
        see += e[i] * e[i];
    }
    // y = b * xc + e has correlation b*sqrt(sxx) / sqrt(b^2 sxx + see)
    const double rho = 0.5;
    const double b = rho * std::sqrt(see / sxx) / std::sqrt(1 - rho * rho);
    auto lex = compile("[c]\nhit\n");
    std::vector<DocumentScores> docs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < n; ++i) {
        double target = 20.0 + 4.0 * (b * (x[i] - mx) + e[i]);
        auto hits = static_cast<std::size_t>(std::clamp(std::lround(target), 0L, 100L));
        std::vector<std::string> words(hits, "hit");
        words.resize(100, "miss");
        std::string site = x[i] > 0 ? "rrn" : "wof";
        auto s = score_document(words, lex);
        docs.push_back({{site, static_cast<PostId>(i)}, site, s});
        ys.push_back(s->at("c"));
    }
    double r = site_correlation(docs, "rrn").at("c");
    CHECK(std::abs(r - 0.5) <= 0.05);
    CHECK(std::abs(r - direct_r(x, ys)) < 1e-9);
}

TEST_CASE("punctuation per hundred words") {
    auto p = punctuation_scores("Stop! Really? Yes, it's (mostly) true: no; «fine» - ok.").value();
    // words: stop really yes it's mostly true no fine ok = 9
    CHECK(p.at("Exclam") == doctest::Approx(100.0 / 9));
    CHECK(p.at("QMark") == doctest::Approx(100.0 / 9));
    CHECK(p.at("Comma") == doctest::Approx(100.0 / 9));
    CHECK(p.at("Apostro") == doctest::Approx(100.0 / 9));
    CHECK(p.at("Parenth") == doctest::Approx(200.0 / 9));
    CHECK(p.at("Colon") == doctest::Approx(100.0 / 9));
    CHECK(p.at("SemiC") == doctest::Approx(100.0 / 9));
    CHECK(p.at("Quote") == doctest::Approx(200.0 / 9));
    CHECK(p.at("Dash") == doctest::Approx(100.0 / 9));
    CHECK(p.at("Period") == doctest::Approx(100.0 / 9));
    CHECK(p.at("AllPunc") == doctest::Approx(1200.0 / 9));
    CHECK_FALSE(punctuation_scores("...").has_value());
    CHECK(unavailable_summary_variables().size() == 4);
}
