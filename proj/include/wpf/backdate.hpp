#pragma once

#include "wpf/corpus.hpp"
#include "wpf/time.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wpf {

struct PostDate {
    PostId id = 0;
    Timestamp date{};
};

/// A post whose claimed date is earlier than that of some post with a lower
/// (earlier-allocated) ID.
struct BackdateFlag {
    std::string site_id;
    PostId post_id = 0;
    Timestamp claimed_date{};
    std::optional<Timestamp> estimated_true_date;
    std::optional<std::int64_t> magnitude_days;
    /// Lower-ID, strictly later-dated posts. Holds the lowest such ID and the
    /// latest-dated lower-ID post, ascending and without repeats.
    std::vector<PostId> witnesses;
};

/// Flags every post A for which some B has id(B) < id(A) and date(B) >
/// date(A). Equal dates never flag. Result is sorted by post id and
/// estimates are filled in. Throws std::invalid_argument on duplicate ids.
std::vector<BackdateFlag> detect_backdated(const std::vector<PostDate>& posts, const std::string& site_id = {});

/// Latest date among unflagged posts with a lower id than the flagged post;
/// none when there is no such post.
std::optional<Timestamp> estimate_true_date(const BackdateFlag& flag, const std::vector<PostDate>& posts,
                                            const std::set<PostId>& flagged);

/// Whole days from claimed to estimated date, floored, never negative.
std::int64_t magnitude_in_days(Timestamp claimed, Timestamp estimated);

/// Runs detection separately for each site of the corpus.
std::vector<BackdateFlag> detect_backdated(const Corpus& corpus);

struct BackdateLanguageStats {
    std::string language;
    std::size_t total = 0;
    std::size_t flagged = 0;
    double percent = 0.0;
    /// Over flagged posts with an estimate; none when there are none.
    std::optional<double> mean_magnitude_days;
    std::optional<std::int64_t> max_magnitude_days;
};

/// One row per language present in the corpus, sorted by percent
/// descending, then language.
std::vector<BackdateLanguageStats> backdate_stats(const Corpus& corpus, const std::vector<BackdateFlag>& flags);

enum class BackdateClass { ProbableForwardDating, TrueBackdating, Unestimated };
std::string_view to_string(BackdateClass c);

BackdateClass classify(const BackdateFlag& flag, std::int64_t grace_days = 2);

struct GracePartition {
    std::vector<BackdateFlag> probable_forward_dating;
    std::vector<BackdateFlag> true_backdating;
    std::vector<BackdateFlag> unestimated;
};

/// magnitude <= grace_days is probable forward dating of the neighbours.
GracePartition classify_grace(const std::vector<BackdateFlag>& flags, std::int64_t grace_days = 2);

}  // namespace wpf
