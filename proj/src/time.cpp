#include "wpf/time.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace wpf {

namespace chr = std::chrono;

MoscowTime to_moscow(Timestamp utc) {
    return MoscowTime{utc.time_since_epoch() + kMoscowOffset};
}

Timestamp from_moscow(MoscowTime msk) {
    return Timestamp{msk.time_since_epoch() - kMoscowOffset};
}

namespace {

int read_int(std::string_view text, std::size_t pos, std::size_t len) {
    if (pos + len > text.size()) {
        throw std::invalid_argument("timestamp too short: " + std::string(text));
    }
    int value = 0;
    auto first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
        throw std::invalid_argument("bad timestamp field in: " + std::string(text));
    }
    return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c) {
        throw std::invalid_argument("malformed timestamp: " + std::string(text));
    }
}

chr::local_days make_day(int y, int m, int d, std::string_view text) {
    chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                            chr::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date: " + std::string(text));
    }
    return chr::local_days{ymd};
}

}  // namespace

chr::local_days parse_date(std::string_view text) {
    int y = read_int(text, 0, 4);
    expect(text, 4, '-');
    int m = read_int(text, 5, 2);
    expect(text, 7, '-');
    int d = read_int(text, 8, 2);
    return make_day(y, m, d, text);
}

Timestamp parse_timestamp(std::string_view text) {
    auto day = parse_date(text);
    if (text.size() < 19 || (text[10] != 'T' && text[10] != ' ')) {
        throw std::invalid_argument("malformed timestamp: " + std::string(text));
    }
    int hh = read_int(text, 11, 2);
    expect(text, 13, ':');
    int mm = read_int(text, 14, 2);
    expect(text, 16, ':');
    int ss = read_int(text, 17, 2);
    if (hh > 23 || mm > 59 || ss > 60) {
        throw std::invalid_argument("time out of range: " + std::string(text));
    }
    std::size_t pos = 19;
    // fractional seconds are dropped
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    }
    chr::seconds offset{0};
    if (pos < text.size()) {
        char sign = text[pos];
        if (sign == 'Z' && pos + 1 == text.size()) {
            // UTC
        } else if ((sign == '+' || sign == '-') && pos + 6 == text.size()) {
            int oh = read_int(text, pos + 1, 2);
            expect(text, pos + 3, ':');
            int om = read_int(text, pos + 4, 2);
            offset = chr::hours{oh} + chr::minutes{om};
            if (sign == '-') offset = -offset;
        } else {
            throw std::invalid_argument("bad timezone suffix: " + std::string(text));
        }
    }
    auto local = chr::local_seconds{day} + chr::hours{hh} + chr::minutes{mm} + chr::seconds{ss};
    return Timestamp{local.time_since_epoch() - offset};
}

namespace {

std::string format_fields(chr::local_seconds t, const char* suffix) {
    auto day = chr::floor<chr::days>(t);
    chr::year_month_day ymd{day};
    chr::hh_mm_ss hms{t - day};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d%s", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()), suffix);
    return buf;
}

}  // namespace

std::string format_utc(Timestamp ts) {
    return format_fields(chr::local_seconds{ts.time_since_epoch()}, "Z");
}

std::string format_moscow(MoscowTime ts) { return format_fields(ts, "+03:00"); }

std::string format_date(chr::local_days day) {
    chr::year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", year, month);
    return buf;
}

YearMonth year_month(MoscowTime ts) {
    chr::year_month_day ymd{chr::floor<chr::days>(ts)};
    return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
}

chr::local_days first_day(YearMonth ym) {
    return chr::local_days{chr::year{ym.year} / chr::month{ym.month} / 1};
}

chr::local_days last_day(YearMonth ym) {
    return chr::local_days{chr::year_month_day_last{chr::year{ym.year},
                                                    chr::month_day_last{chr::month{ym.month}}}};
}

bool is_weekend(MoscowTime ts) {
    chr::weekday wd{chr::floor<chr::days>(ts)};
    return wd == chr::Saturday || wd == chr::Sunday;
}

chr::local_days week_start(MoscowTime ts) {
    auto day = chr::floor<chr::days>(ts);
    chr::weekday wd{day};
    // iso_encoding: Monday=1 .. Sunday=7
    return day - chr::days{wd.iso_encoding() - 1};
}

}  // namespace wpf
