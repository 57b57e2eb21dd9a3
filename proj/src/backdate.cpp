#include "wpf/backdate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace wpf {

namespace {

void require_unique_ids(const std::vector<PostDate>& posts) {
    std::vector<PostId> ids;
    ids.reserve(posts.size());
    for (const auto& p : posts) ids.push_back(p.id);
    std::sort(ids.begin(), ids.end());
    auto dup = std::adjacent_find(ids.begin(), ids.end());
    if (dup != ids.end()) throw std::invalid_argument("duplicate post id " + std::to_string(*dup));
}

// Posts sorted by id with a running maximum of date over unflagged posts.
struct PredecessorIndex {
    std::vector<PostId> ids;
    std::vector<std::optional<Timestamp>> best;  // best[i]: over ids[0..i]

    PredecessorIndex(const std::vector<PostDate>& posts, const std::set<PostId>& flagged) {
        std::vector<PostDate> sorted = posts;
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
        std::optional<Timestamp> running;
        for (const auto& p : sorted) {
            if (!flagged.contains(p.id) && (!running || p.date > *running)) running = p.date;
            ids.push_back(p.id);
            best.push_back(running);
        }
    }

    std::optional<Timestamp> before(PostId id) const {
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        if (it == ids.begin()) return std::nullopt;
        return best[static_cast<std::size_t>(it - ids.begin()) - 1];
    }
};

}  // namespace

std::int64_t magnitude_in_days(Timestamp claimed, Timestamp estimated) {
    auto secs = (estimated - claimed).count();
    if (secs <= 0) return 0;
    return secs / 86400;
}

std::vector<BackdateFlag> detect_backdated(const std::vector<PostDate>& posts, const std::string& site_id) {
    require_unique_ids(posts);
    const std::size_t n = posts.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (posts[a].date != posts[b].date) return posts[a].date < posts[b].date;
        return posts[a].id < posts[b].id;
    });

    // Scanning from the latest date backwards, keep the smallest id among
    // strictly later-dated posts. Equal-date groups are folded in together
    // after the whole group has been checked.
    std::vector<std::optional<std::size_t>> min_later(n);
    std::optional<std::size_t> suffix_min;
    std::size_t i = n;
    while (i > 0) {
        std::size_t j = i;
        while (j > 0 && posts[order[j - 1]].date == posts[order[i - 1]].date) --j;
        for (std::size_t k = j; k < i; ++k) {
            std::size_t p = order[k];
            if (suffix_min && posts[*suffix_min].id < posts[p].id) min_later[p] = suffix_min;
        }
        for (std::size_t k = j; k < i; ++k) {
            std::size_t p = order[k];
            if (!suffix_min || posts[p].id < posts[*suffix_min].id) suffix_min = p;
        }
        i = j;
    }

    std::set<PostId> flagged;
    for (std::size_t p = 0; p < n; ++p) {
        if (min_later[p]) flagged.insert(posts[p].id);
    }

    // Latest-dated lower-id post over all posts, for the second witness.
    std::vector<std::size_t> by_id(n);
    std::iota(by_id.begin(), by_id.end(), 0);
    std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) { return posts[a].id < posts[b].id; });
    std::map<PostId, std::size_t> latest_before;
    std::optional<std::size_t> latest;
    for (std::size_t p : by_id) {
        if (latest) latest_before[posts[p].id] = *latest;
        if (!latest || posts[p].date > posts[*latest].date) latest = p;
    }

    PredecessorIndex index(posts, flagged);
    std::vector<BackdateFlag> flags;
    for (std::size_t p : by_id) {
        if (!min_later[p]) continue;
        BackdateFlag f;
        f.site_id = site_id;
        f.post_id = posts[p].id;
        f.claimed_date = posts[p].date;
        f.witnesses.push_back(posts[*min_later[p]].id);
        PostId w2 = posts[latest_before.at(posts[p].id)].id;
        if (w2 != f.witnesses.front()) f.witnesses.push_back(w2);
        std::sort(f.witnesses.begin(), f.witnesses.end());
        f.estimated_true_date = index.before(f.post_id);
        if (f.estimated_true_date) f.magnitude_days = magnitude_in_days(f.claimed_date, *f.estimated_true_date);
        flags.push_back(std::move(f));
    }
    return flags;
}

std::optional<Timestamp> estimate_true_date(const BackdateFlag& flag, const std::vector<PostDate>& posts,
                                            const std::set<PostId>& flagged) {
    return PredecessorIndex(posts, flagged).before(flag.post_id);
}

std::vector<BackdateFlag> detect_backdated(const Corpus& corpus) {
    std::map<std::string, std::vector<PostDate>> by_site;
    for (const auto& a : corpus) by_site[a.site_id].push_back({a.post_id, a.date_gmt});
    std::vector<BackdateFlag> out;
    for (const auto& [site, posts] : by_site) {
        auto flags = detect_backdated(posts, site);
        out.insert(out.end(), std::make_move_iterator(flags.begin()), std::make_move_iterator(flags.end()));
    }
    return out;
}

std::vector<BackdateLanguageStats> backdate_stats(const Corpus& corpus, const std::vector<BackdateFlag>& flags) {
    std::map<ArticleKey, const BackdateFlag*> flag_of;
    for (const auto& f : flags) flag_of[{f.site_id, f.post_id}] = &f;

    struct Acc {
        std::size_t total = 0;
        std::size_t flagged = 0;
        std::size_t estimated = 0;
        double sum = 0.0;
        std::optional<std::int64_t> max;
    };
    std::map<std::string, Acc> acc;
    for (const auto& a : corpus) {
        auto& s = acc[a.language];
        ++s.total;
        auto it = flag_of.find(a.key());
        if (it == flag_of.end()) continue;
        ++s.flagged;
        if (auto m = it->second->magnitude_days) {
            ++s.estimated;
            s.sum += static_cast<double>(*m);
            s.max = s.max ? std::max(*s.max, *m) : *m;
        }
    }

    std::vector<BackdateLanguageStats> rows;
    for (const auto& [lang, s] : acc) {
        BackdateLanguageStats r;
        r.language = lang;
        r.total = s.total;
        r.flagged = s.flagged;
        r.percent = s.total ? 100.0 * static_cast<double>(s.flagged) / static_cast<double>(s.total) : 0.0;
        if (s.estimated) r.mean_magnitude_days = s.sum / static_cast<double>(s.estimated);
        r.max_magnitude_days = s.max;
        rows.push_back(std::move(r));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.percent > b.percent; });
    return rows;
}

std::string_view to_string(BackdateClass c) {
    switch (c) {
        case BackdateClass::ProbableForwardDating: return "probable_forward_dating";
        case BackdateClass::TrueBackdating: return "true_backdating";
        case BackdateClass::Unestimated: return "unestimated";
    }
    return "unestimated";
}

BackdateClass classify(const BackdateFlag& flag, std::int64_t grace_days) {
    if (!flag.magnitude_days) return BackdateClass::Unestimated;
    return *flag.magnitude_days <= grace_days ? BackdateClass::ProbableForwardDating : BackdateClass::TrueBackdating;
}

GracePartition classify_grace(const std::vector<BackdateFlag>& flags, std::int64_t grace_days) {
    GracePartition out;
    for (const auto& f : flags) {
        switch (classify(f, grace_days)) {
            case BackdateClass::ProbableForwardDating: out.probable_forward_dating.push_back(f); break;
            case BackdateClass::TrueBackdating: out.true_backdating.push_back(f); break;
            case BackdateClass::Unestimated: out.unestimated.push_back(f); break;
        }
    }
    return out;
}

}  // namespace wpf
