#include <doctest.h>

#include "support/builders.hpp"
#include "support/oracles.hpp"
#include "wpf/backdate.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

using namespace wpf;
using namespace std::chrono;
using wpf::testing::make_article;
using wpf::testing::oracle_estimate;
using wpf::testing::oracle_flags;
using wpf::testing::random_posts;

namespace {

Timestamp on_day(int d, int hour = 12) {
    return Timestamp{sys_days{2022y / March / 1} + days{d - 1} + hours{hour}};
}

std::set<PostId> flag_ids(const std::vector<BackdateFlag>& flags) {
    std::set<PostId> out;
    for (const auto& f : flags) out.insert(f.post_id);
    return out;
}

void check_against_oracle(const std::vector<PostDate>& posts) {
    auto flags = detect_backdated(posts, "s");
    auto expected = oracle_flags(posts);
    REQUIRE(flag_ids(flags) == expected);
    for (const auto& f : flags) {
        CHECK(f.estimated_true_date == oracle_estimate(f.post_id, posts, expected));
        REQUIRE_FALSE(f.witnesses.empty());
        for (PostId w : f.witnesses) {
            auto it = std::find_if(posts.begin(), posts.end(), [&](const PostDate& p) { return p.id == w; });
            REQUIRE(it != posts.end());
            CHECK(it->id < f.post_id);
            CHECK(it->date > f.claimed_date);
        }
    }
}

}  // namespace

TEST_CASE("monotone timeline has no flags") {
    CHECK(detect_backdated({{1, on_day(1)}, {2, on_day(2)}, {3, on_day(3)}}).empty());
    CHECK(detect_backdated(std::vector<PostDate>{}).empty());
}

TEST_CASE("equal dates never flag") {
    CHECK(detect_backdated({{7, on_day(4)}, {3, on_day(4)}}).empty());
}

TEST_CASE("inversion example follows the pairwise definition") {
    std::vector<PostDate> posts = {{10, on_day(1)}, {5, on_day(9)}, {11, on_day(2)}};
    auto flags = detect_backdated(posts, "rrn");
    // 5 < 10 and Mar 9 > Mar 1, so 10 is flagged as well as 11
    REQUIRE(flag_ids(flags) == std::set<PostId>{10, 11});
    const auto& f11 = flags[1];
    CHECK(f11.post_id == 11);
    CHECK(f11.witnesses == std::vector<PostId>{5});
    CHECK(f11.estimated_true_date == on_day(9));
    CHECK(f11.magnitude_days == 7);
    CHECK(flags[0].estimated_true_date == on_day(9));
    CHECK(flags[0].magnitude_days == 8);
}

TEST_CASE("duplicate ids are rejected") {
    CHECK_THROWS_AS(detect_backdated({{1, on_day(1)}, {1, on_day(2)}}), std::invalid_argument);
}

TEST_CASE("estimate is none without an unflagged predecessor") {
    std::vector<PostDate> posts = {{1, on_day(5)}, {2, on_day(1)}};
    BackdateFlag f{"s", 2, on_day(1), {}, {}, {1}};
    CHECK_FALSE(estimate_true_date(f, posts, {1, 2}).has_value());
    CHECK(estimate_true_date(f, posts, {2}) == on_day(5));
}

TEST_CASE("translation created 136 days after its original") {
    // daily posts; the translation of post 100 is created on day 137 but
    // dated the same day as the original
    std::vector<PostDate> posts;
    for (int d = 1; d <= 150; ++d) posts.push_back({static_cast<PostId>(99 + d), on_day(d, 9)});
    PostId translation = 99 + 137 + 1000;
    posts.push_back({translation, on_day(1, 9)});
    // later posts get ids above the translation
    for (auto& p : posts) {
        if (p.id > 99 + 137 && p.id != translation) p.id += 2000;
    }
    auto flags = detect_backdated(posts, "wof");
    REQUIRE(flags.size() == 1);
    CHECK(flags[0].post_id == translation);
    CHECK(flags[0].magnitude_days == 136);
}

TEST_CASE("detection agrees with the pairwise oracle") {
    std::mt19937_64 rng(2024);
    for (int seed = 0; seed < 100; ++seed) {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 1000)(rng);
        check_against_oracle(random_posts(rng, n));
    }
    // dense ties
    for (int seed = 0; seed < 50; ++seed) {
        std::vector<PostDate> posts;
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 60)(rng);
        for (std::size_t i = 0; i < n; ++i) {
            posts.push_back({static_cast<PostId>(i + 1), on_day(std::uniform_int_distribution<int>(1, 4)(rng))});
        }
        check_against_oracle(posts);
    }
}

TEST_CASE("flags are independent of input order") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 20; ++round) {
        auto posts = random_posts(rng, 300);
        auto before = detect_backdated(posts);
        std::shuffle(posts.begin(), posts.end(), rng);
        auto after = detect_backdated(posts);
        REQUIRE(before.size() == after.size());
        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(before[i].post_id == after[i].post_id);
            CHECK(before[i].witnesses == after[i].witnesses);
            CHECK(before[i].estimated_true_date == after[i].estimated_true_date);
        }
    }
}

TEST_CASE("appending a newest post changes no existing flag") {
    std::mt19937_64 rng(6);
    for (int round = 0; round < 20; ++round) {
        auto posts = random_posts(rng, 200);
        auto before = flag_ids(detect_backdated(posts));
        PostId max_id = 0;
        Timestamp max_date{};
        for (const auto& p : posts) {
            max_id = std::max(max_id, p.id);
            max_date = std::max(max_date, p.date);
        }
        posts.push_back({max_id + 1, max_date + seconds{1}});
        CHECK(flag_ids(detect_backdated(posts)) == before);
    }
}

TEST_CASE("backdate_stats per language") {
    std::vector<Article> arts;
    // ids 1..10 dated 10 days apart; 5 claims day 35, 9 claims day 71
    for (int i = 1; i <= 10; ++i) {
        int d = i * 10;
        if (i == 5) d = 35;
        if (i == 9) d = 71;
        auto a = make_article("wof", i, "fr", "2022-01-01T12:00:00", "x");
        a.date_gmt = on_day(d);
        a.date_msk = to_moscow(a.date_gmt);
        arts.push_back(a);
    }
    arts.push_back(make_article("wof", 50, "de", "2023-01-01T12:00:00", "y"));
    Corpus corpus(arts);
    auto flags = detect_backdated(corpus);
    REQUIRE(flag_ids(flags) == std::set<PostId>{5, 9});
    auto stats = backdate_stats(corpus, flags);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].language == "fr");
    CHECK(stats[0].percent == doctest::Approx(20.0));
    CHECK(*stats[0].mean_magnitude_days == doctest::Approx(7.0));
    CHECK(stats[0].max_magnitude_days == 9);
    CHECK(stats[1].language == "de");
    CHECK(stats[1].percent == 0.0);
    CHECK_FALSE(stats[1].mean_magnitude_days.has_value());
    CHECK_FALSE(stats[1].max_magnitude_days.has_value());
}

TEST_CASE("detection runs per site") {
    auto a = make_article("rrn", 1, "en", "2022-03-09T00:00:00", "a");
    auto b = make_article("wof", 2, "en", "2022-03-01T00:00:00", "b");
    CHECK(detect_backdated(Corpus({a, b})).empty());
}

TEST_CASE("grace classification") {
    auto flag = [](std::optional<std::int64_t> m) {
        BackdateFlag f;
        f.magnitude_days = m;
        return f;
    };
    CHECK(classify(flag(1)) == BackdateClass::ProbableForwardDating);
    CHECK(classify(flag(30)) == BackdateClass::TrueBackdating);
    CHECK(classify(flag(2), 2) == BackdateClass::ProbableForwardDating);
    CHECK(classify(flag(3), 2) == BackdateClass::TrueBackdating);
    CHECK(classify(flag(std::nullopt)) == BackdateClass::Unestimated);
    auto parts = classify_grace({flag(0), flag(2), flag(5), flag(std::nullopt)});
    CHECK(parts.probable_forward_dating.size() == 2);
    CHECK(parts.true_backdating.size() == 1);
    CHECK(parts.unestimated.size() == 1);
}
