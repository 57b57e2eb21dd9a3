#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace wpf {

/// UTC instant at one-second resolution, as returned by the WordPress API.
using Timestamp = std::chrono::sys_seconds;

/// Wall-clock time in Moscow (fixed UTC+3, no DST since 2014).
using MoscowTime = std::chrono::local_seconds;

inline constexpr std::chrono::hours kMoscowOffset{3};

MoscowTime to_moscow(Timestamp utc);
Timestamp from_moscow(MoscowTime msk);

/// Parses `YYYY-MM-DDTHH:MM:SS` with an optional `Z` or `+hh:mm`/`-hh:mm`
/// suffix. A missing suffix means UTC, which is how `date_gmt` arrives.
/// Throws std::invalid_argument on malformed input.
Timestamp parse_timestamp(std::string_view text);

/// `2022-03-04T00:00:00Z`
std::string format_utc(Timestamp ts);
/// `2022-03-04T03:00:00+03:00`
std::string format_moscow(MoscowTime ts);
/// `2022-03-04`
std::string format_date(std::chrono::local_days day);

struct YearMonth {
    int year = 0;
    unsigned month = 0;

    auto operator<=>(const YearMonth&) const = default;
    std::string str() const;  // "2022-03"
};

YearMonth year_month(MoscowTime ts);
std::chrono::local_days first_day(YearMonth ym);
std::chrono::local_days last_day(YearMonth ym);

bool is_weekend(MoscowTime ts);
/// Monday of the week containing `ts`.
std::chrono::local_days week_start(MoscowTime ts);

std::chrono::local_days parse_date(std::string_view text);

}  // namespace wpf
