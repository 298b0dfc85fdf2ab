#include "polarscope/time_utils.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <ctime>

namespace polarscope {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// Days since epoch for a civil date (Howard Hinnant's algorithm); avoids
// relying on the non-standard timegm.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return m == 2 && leap ? 29 : kDays[m - 1];
}

std::optional<Timestamp> make_utc(int y, int mo, int d, int h, int mi, int s) {
    if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo)) return std::nullopt;
    if (h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) return std::nullopt;
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view sv) {
    // YYYY-MM-DDTHH:MM:SS[.frac][Z|±HH:MM|±HHMM]
    if (sv.size() < 19) return std::nullopt;
    auto num = [&](std::size_t pos, std::size_t len, int& out) {
        out = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (i >= sv.size() || !std::isdigit(static_cast<unsigned char>(sv[i]))) return false;
            out = out * 10 + (sv[i] - '0');
        }
        return true;
    };
    int y, mo, d, h, mi, s;
    if (!num(0, 4, y) || sv[4] != '-' || !num(5, 2, mo) || sv[7] != '-' || !num(8, 2, d))
        return std::nullopt;
    if ((sv[10] != 'T' && sv[10] != ' ') || !num(11, 2, h) || sv[13] != ':' || !num(14, 2, mi) ||
        sv[16] != ':' || !num(17, 2, s))
        return std::nullopt;
    std::size_t pos = 19;
    if (pos < sv.size() && sv[pos] == '.') {
        ++pos;
        while (pos < sv.size() && std::isdigit(static_cast<unsigned char>(sv[pos]))) ++pos;
    }
    std::int64_t offset = 0;
    if (pos < sv.size()) {
        char c = sv[pos];
        if (c == 'Z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            int oh, om = 0;
            std::size_t rest = sv.size() - (pos + 1);
            if (!num(pos + 1, 2, oh)) return std::nullopt;
            if (rest >= 5 && sv[pos + 3] == ':') {
                if (!num(pos + 4, 2, om)) return std::nullopt;
                pos += 6;
            } else if (rest >= 4) {
                if (!num(pos + 3, 2, om)) return std::nullopt;
                pos += 5;
            } else {
                pos += 3;
            }
            offset = (c == '+' ? 1 : -1) * (oh * 3600 + om * 60);
        }
    }
    if (pos != sv.size()) return std::nullopt;
    auto t = make_utc(y, mo, d, h, mi, s);
    if (!t) return std::nullopt;
    return *t - offset;
}

std::string format_iso8601(Timestamp t) {
    std::time_t tt = static_cast<std::time_t>(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::optional<Timestamp> parse_twitter_time(std::string_view sv) {
    // "Tue Jan 07 06:03:00 +0000 2020"
    if (sv.size() != 30) return std::nullopt;
    static constexpr std::array<std::string_view, 12> kMonths = {
        "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    int mo = 0;
    std::string_view mon = sv.substr(4, 3);
    for (int i = 0; i < 12; ++i)
        if (kMonths[i] == mon) mo = i + 1;
    if (mo == 0) return std::nullopt;
    auto num = [&](std::size_t pos, std::size_t len) -> int {
        int out = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(sv[i]))) return -1;
            out = out * 10 + (sv[i] - '0');
        }
        return out;
    };
    int d = num(8, 2), h = num(11, 2), mi = num(14, 2), s = num(17, 2), y = num(26, 4);
    if (d < 0 || h < 0 || mi < 0 || s < 0 || y < 0) return std::nullopt;
    int oh = num(21, 2), om = num(23, 2);
    if (oh < 0 || om < 0 || (sv[20] != '+' && sv[20] != '-')) return std::nullopt;
    std::int64_t offset = (sv[20] == '+' ? 1 : -1) * (oh * 3600 + om * 60);
    auto t = make_utc(y, mo, d, h, mi, s);
    if (!t) return std::nullopt;
    return *t - offset;
}

std::optional<std::int64_t> parse_duration_seconds(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (all_digits(s)) {
        std::int64_t v = 0;
        for (char c : s) v = v * 10 + (c - '0');
        return v;
    }
    std::int64_t total = 0;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        std::int64_t v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            v = v * 10 + (s[i++] - '0');
        if (i >= s.size()) return std::nullopt;
        std::size_t u0 = i;
        while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
        std::string_view unit = s.substr(u0, i - u0);
        std::int64_t mult;
        if (unit == "s" || unit == "sec" || unit == "secs") mult = 1;
        else if (unit == "m" || unit == "min" || unit == "mins") mult = 60;
        else if (unit == "h" || unit == "hr" || unit == "hrs") mult = 3600;
        else if (unit == "d") mult = 86400;
        else if (unit == "w") mult = 7 * 86400;
        else return std::nullopt;
        total += v * mult;
    }
    return total;
}

std::string format_utc_date(Timestamp t) {
    std::time_t tt = static_cast<std::time_t>(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday);
    return buf;
}

}  // namespace polarscope
