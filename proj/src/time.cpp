#include "honeysheets/time.hpp"

#include "honeysheets/error.hpp"

#include <cctype>
#include <cstdio>

namespace honeysheets {

namespace {

using namespace std::chrono;

struct Civil {
    int year;
    unsigned month, day;
    long hour, minute, second, micros;
};

Civil split(Timestamp ts) {
    const auto day = floor<days>(ts);
    const year_month_day ymd{day};
    const hh_mm_ss hms{ts - day};
    return Civil{int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()),
                 static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                 static_cast<long>(hms.seconds().count()),
                 static_cast<long>(duration_cast<microseconds>(hms.subseconds()).count())};
}

bool read_digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
    if (pos + n > s.size())
        return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

} // namespace

Timestamp now_utc() {
    return floor<microseconds>(system_clock::now());
}

std::string format_iso(Timestamp ts) {
    const Civil c = split(ts);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ld.%06ldZ", c.year, c.month, c.day,
                  c.hour, c.minute, c.second, c.micros);
    return buf;
}

std::string format_iso_compact(Timestamp ts) {
    const Civil c = split(ts);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d%02u%02uT%02ld%02ld%02ld.%06ldZ", c.year, c.month, c.day,
                  c.hour, c.minute, c.second, c.micros);
    return buf;
}

std::string format_date(Timestamp ts) {
    const Civil c = split(ts);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", c.year, c.month, c.day);
    return buf;
}

Timestamp start_of_day(Timestamp ts) {
    return Timestamp{floor<days>(ts)};
}

std::optional<Timestamp> parse_iso(std::string_view s) {
    int y, mo, d;
    if (!read_digits(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || !read_digits(s, 5, 2, mo) ||
        s[7] != '-' || !read_digits(s, 8, 2, d))
        return std::nullopt;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        return std::nullopt;
    Timestamp ts{sys_days{ymd}};
    if (s.size() == 10)
        return ts;

    int h, mi, sec;
    if (s.size() < 20 || s[10] != 'T' || !read_digits(s, 11, 2, h) || s[13] != ':' ||
        !read_digits(s, 14, 2, mi) || s[16] != ':' || !read_digits(s, 17, 2, sec))
        return std::nullopt;
    if (h > 23 || mi > 59 || sec > 59)
        return std::nullopt;
    ts += hours{h} + minutes{mi} + seconds{sec};

    std::size_t pos = 19;
    if (s[pos] == '.') {
        ++pos;
        long micros = 0;
        int digits = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            if (digits < 6) {
                micros = micros * 10 + (s[pos] - '0');
            }
            ++digits;
            ++pos;
        }
        if (digits == 0)
            return std::nullopt;
        for (int i = digits; i < 6; ++i)
            micros *= 10;
        ts += microseconds{micros};
    }
    if (pos + 1 != s.size() || s[pos] != 'Z')
        return std::nullopt;
    return ts;
}

Timestamp parse_iso_or_throw(std::string_view text) {
    if (auto ts = parse_iso(text))
        return *ts;
    throw Error(Errc::ParseError, "bad ISO-8601 timestamp '" + std::string(text) + "'");
}

} // namespace honeysheets
