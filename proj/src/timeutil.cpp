#include "hfseason/timeutil.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace hfseason::timeutil {

namespace {

constexpr std::int64_t kMsPerDay = 86'400'000;

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::optional<int> parse_int_field(std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

std::int64_t days_from_civil(const CivilDate& d) {
    // Shift the year so that March is the first month; leap days then fall
    // at the end of the shifted year and the day-of-year formula is exact.
    std::int64_t y = d.year;
    const unsigned m = d.month;
    y -= m <= 2 ? 1 : 0;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);              // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d.day - 1;  // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;             // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t days) {
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned day = doy - (153 * mp + 2) / 5 + 1;
    const unsigned month = mp < 10 ? mp + 3 : mp - 9;
    return CivilDate{static_cast<int>(y + (month <= 2 ? 1 : 0)), month, day};
}

int day_of_week(std::int64_t days_since_epoch) {
    // 1970-01-01 was a Thursday (ISO day 4).
    std::int64_t w = (days_since_epoch + 3) % 7;
    if (w < 0) w += 7;
    return static_cast<int>(w) + 1;
}

std::int64_t civil_to_epoch_ms(const CivilTime& t) {
    return days_from_civil(t.date) * kMsPerDay + t.hour * 3'600'000LL + t.minute * 60'000LL +
           t.second * 1'000LL + t.millis;
}

CivilTime epoch_ms_to_civil(std::int64_t epoch_ms) {
    std::int64_t days = epoch_ms / kMsPerDay;
    std::int64_t rem = epoch_ms % kMsPerDay;
    if (rem < 0) {
        rem += kMsPerDay;
        days -= 1;
    }
    CivilTime out{};
    out.date = civil_from_days(days);
    out.hour = static_cast<unsigned>(rem / 3'600'000);
    rem %= 3'600'000;
    out.minute = static_cast<unsigned>(rem / 60'000);
    rem %= 60'000;
    out.second = static_cast<unsigned>(rem / 1'000);
    out.millis = static_cast<unsigned>(rem % 1'000);
    return out;
}

std::int64_t local_epoch_day(std::int64_t epoch_ms, int tz_offset_minutes) {
    const std::int64_t shifted = epoch_ms + static_cast<std::int64_t>(tz_offset_minutes) * 60'000;
    std::int64_t days = shifted / kMsPerDay;
    if (shifted % kMsPerDay < 0) days -= 1;
    return days;
}

std::optional<CivilDate> parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto y = parse_int_field(s.substr(0, 4));
    auto m = parse_int_field(s.substr(5, 2));
    auto d = parse_int_field(s.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    if (*m < 1 || *m > 12 || *d < 1 || *d > 31) return std::nullopt;
    return CivilDate{*y, static_cast<unsigned>(*m), static_cast<unsigned>(*d)};
}

std::optional<std::int64_t> parse_timestamp(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return std::nullopt;

    if (all_digits(s)) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
        return v;  // epoch milliseconds
    }

    // ISO-8601: YYYY-MM-DD[T ]HH:MM[:SS[.fff]](Z|+HH[:MM]|-HH[:MM])
    if (s.size() < 17) return std::nullopt;
    auto date = parse_date(s.substr(0, 10));
    if (!date) return std::nullopt;
    if (s[10] != 'T' && s[10] != ' ') return std::nullopt;

    std::size_t pos = 11;
    auto take2 = [&](unsigned& out) -> bool {
        if (pos + 2 > s.size()) return false;
        auto v = parse_int_field(s.substr(pos, 2));
        if (!v || *v < 0) return false;
        out = static_cast<unsigned>(*v);
        pos += 2;
        return true;
    };

    CivilTime t{};
    t.date = *date;
    if (!take2(t.hour) || t.hour > 23) return std::nullopt;
    if (pos >= s.size() || s[pos] != ':') return std::nullopt;
    ++pos;
    if (!take2(t.minute) || t.minute > 59) return std::nullopt;
    if (pos < s.size() && s[pos] == ':') {
        ++pos;
        if (!take2(t.second) || t.second > 60) return std::nullopt;
        if (t.second == 60) t.second = 59;  // fold leap seconds
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            std::string_view frac = s.substr(start, pos - start);
            if (frac.empty()) return std::nullopt;
            unsigned ms = 0;
            for (std::size_t i = 0; i < 3; ++i) {
                ms = ms * 10 + (i < frac.size() ? static_cast<unsigned>(frac[i] - '0') : 0);
            }
            t.millis = ms;
        }
    }

    if (pos >= s.size()) return std::nullopt;  // zone designator required
    std::int64_t offset_minutes = 0;
    const char zc = s[pos];
    if (zc == 'Z' || zc == 'z') {
        ++pos;
    } else if (zc == '+' || zc == '-') {
        ++pos;
        unsigned oh = 0, om = 0;
        if (!take2(oh) || oh > 14) return std::nullopt;
        if (pos < s.size()) {
            if (s[pos] == ':') ++pos;
            if (pos < s.size()) {
                if (!take2(om) || om > 59) return std::nullopt;
            }
        }
        offset_minutes = static_cast<std::int64_t>(oh) * 60 + om;
        if (zc == '-') offset_minutes = -offset_minutes;
    } else {
        return std::nullopt;
    }
    if (pos != s.size()) return std::nullopt;

    return civil_to_epoch_ms(t) - offset_minutes * 60'000;
}

std::string format_utc(std::int64_t epoch_ms) {
    const CivilTime t = epoch_ms_to_civil(epoch_ms);
    std::array<char, 32> buf{};
    int len;
    if (t.millis != 0) {
        len = std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02u:%02u:%02u.%03uZ",
                            t.date.year, t.date.month, t.date.day, t.hour, t.minute, t.second,
                            t.millis);
    } else {
        len = std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02u:%02u:%02uZ", t.date.year,
                            t.date.month, t.date.day, t.hour, t.minute, t.second);
    }
    return std::string(buf.data(), static_cast<std::size_t>(len));
}

std::string format_date(std::int64_t epoch_day) {
    const CivilDate d = civil_from_days(epoch_day);
    std::array<char, 16> buf{};
    int len = std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u", d.year, d.month, d.day);
    return std::string(buf.data(), static_cast<std::size_t>(len));
}

}  // namespace hfseason::timeutil
