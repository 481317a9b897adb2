#pragma once

#include <cstdint>
#include <string>

namespace qlfc {

// Seconds since the Unix epoch, always UTC. Forum-local wall time is derived
// on demand with an explicit offset; nothing in the data model stores local
// time.
using UtcSeconds = std::int64_t;

struct CivilDateTime {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
};

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, int month, int day);
CivilDateTime civil_from_utc(UtcSeconds t);
UtcSeconds utc_from_civil(const CivilDateTime& c);

// 0 = Sunday .. 6 = Saturday.
int weekday_from_days(std::int64_t days);

// RFC 3339: "YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)". Fractional
// seconds are accepted and discarded. Throws ValidationError on malformed
// input.
UtcSeconds parse_rfc3339(const std::string& s);
std::string format_rfc3339(UtcSeconds t);

// Legacy dump timestamps, "YYYY-MM-DD HH:MM:SS", interpreted as forum-local
// wall time at the given UTC offset.
UtcSeconds parse_local_datetime(const std::string& s, int utc_offset_minutes);

// Wall-clock view of a UTC instant at the given offset.
CivilDateTime local_view(UtcSeconds t, int utc_offset_minutes);
int local_weekday(UtcSeconds t, int utc_offset_minutes);

}  // namespace qlfc
