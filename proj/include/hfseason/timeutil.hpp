#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hfseason::timeutil {

// All timestamps in this project are UTC epoch milliseconds. Display
// timezones are fixed-minute offsets applied at the point of use; there is
// no DST handling anywhere.

struct CivilDate {
    int year;
    unsigned month;  // 1..12
    unsigned day;    // 1..31
};

struct CivilTime {
    CivilDate date;
    unsigned hour;    // 0..23
    unsigned minute;  // 0..59
    unsigned second;  // 0..59
    unsigned millis;  // 0..999
};

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(const CivilDate& d);

/// Inverse of days_from_civil.
CivilDate civil_from_days(std::int64_t days);

/// ISO day of week, 1 = Monday .. 7 = Sunday.
int day_of_week(std::int64_t days_since_epoch);

std::int64_t civil_to_epoch_ms(const CivilTime& t);
CivilTime epoch_ms_to_civil(std::int64_t epoch_ms);

/// Epoch day of the civil date obtained after shifting a UTC instant by a
/// fixed minute offset.
std::int64_t local_epoch_day(std::int64_t epoch_ms, int tz_offset_minutes);

/// Parses "YYYY-MM-DD".
std::optional<CivilDate> parse_date(std::string_view s);

/// Parses an ISO-8601 timestamp with zone designator (Z or +-HH[:MM]) or an
/// integer epoch-milliseconds value. Returns nullopt on malformed input.
std::optional<std::int64_t> parse_timestamp(std::string_view s);

/// "YYYY-MM-DDTHH:MM:SSZ" (with ".mmm" inserted when sub-second).
std::string format_utc(std::int64_t epoch_ms);

/// "YYYY-MM-DD" for an epoch day.
std::string format_date(std::int64_t epoch_day);

}  // namespace hfseason::timeutil
