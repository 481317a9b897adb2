#include "qlfc/timeutil.hpp"

#include <cstdio>

#include "qlfc/common.hpp"

namespace qlfc {

// Howard Hinnant's civil-days algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);              // [0, 399]
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;             // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

static void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

CivilDateTime civil_from_utc(UtcSeconds t) {
    std::int64_t days = t / 86400;
    std::int64_t rem = t % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    CivilDateTime c;
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(rem / 3600);
    c.minute = static_cast<int>((rem / 60) % 60);
    c.second = static_cast<int>(rem % 60);
    return c;
}

UtcSeconds utc_from_civil(const CivilDateTime& c) {
    return days_from_civil(c.year, c.month, c.day) * 86400 +
           c.hour * 3600 + c.minute * 60 + c.second;
}

int weekday_from_days(std::int64_t days) {
    return static_cast<int>(days >= -4 ? (days + 4) % 7 : (days + 5) % 7 + 6);
}

static bool parse_fixed_int(const std::string& s, size_t pos, size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

static bool valid_civil(const CivilDateTime& c) {
    static const int days_in[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (c.month < 1 || c.month > 12) return false;
    int dim = days_in[c.month - 1];
    bool leap = (c.year % 4 == 0 && c.year % 100 != 0) || c.year % 400 == 0;
    if (c.month == 2 && leap) dim = 29;
    return c.day >= 1 && c.day <= dim && c.hour >= 0 && c.hour < 24 &&
           c.minute >= 0 && c.minute < 60 && c.second >= 0 && c.second <= 60;
}

UtcSeconds parse_rfc3339(const std::string& s) {
    CivilDateTime c;
    if (!parse_fixed_int(s, 0, 4, c.year) || s.size() < 20 || s[4] != '-' ||
        !parse_fixed_int(s, 5, 2, c.month) || s[7] != '-' ||
        !parse_fixed_int(s, 8, 2, c.day) || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') ||
        !parse_fixed_int(s, 11, 2, c.hour) || s[13] != ':' ||
        !parse_fixed_int(s, 14, 2, c.minute) || s[16] != ':' ||
        !parse_fixed_int(s, 17, 2, c.second)) {
        throw ValidationError("malformed RFC 3339 timestamp: '" + s + "'");
    }
    if (!valid_civil(c)) throw ValidationError("out-of-range timestamp: '" + s + "'");
    size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    }
    if (pos >= s.size()) throw ValidationError("timestamp missing offset: '" + s + "'");
    int offset_min = 0;
    if (s[pos] == 'Z' || s[pos] == 'z') {
        ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
        int sign = s[pos] == '+' ? 1 : -1;
        int oh = 0, om = 0;
        if (!parse_fixed_int(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
            !parse_fixed_int(s, pos + 4, 2, om)) {
            throw ValidationError("malformed timestamp offset: '" + s + "'");
        }
        offset_min = sign * (oh * 60 + om);
        pos += 6;
    } else {
        throw ValidationError("malformed timestamp offset: '" + s + "'");
    }
    if (pos != s.size()) throw ValidationError("trailing characters in timestamp: '" + s + "'");
    return utc_from_civil(c) - static_cast<std::int64_t>(offset_min) * 60;
}

std::string format_rfc3339(UtcSeconds t) {
    CivilDateTime c = civil_from_utc(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  c.year, c.month, c.day, c.hour, c.minute, c.second);
    return buf;
}

UtcSeconds parse_local_datetime(const std::string& s, int utc_offset_minutes) {
    CivilDateTime c;
    if (s.size() != 19 ||
        !parse_fixed_int(s, 0, 4, c.year) || s[4] != '-' ||
        !parse_fixed_int(s, 5, 2, c.month) || s[7] != '-' ||
        !parse_fixed_int(s, 8, 2, c.day) || (s[10] != ' ' && s[10] != 'T') ||
        !parse_fixed_int(s, 11, 2, c.hour) || s[13] != ':' ||
        !parse_fixed_int(s, 14, 2, c.minute) || s[16] != ':' ||
        !parse_fixed_int(s, 17, 2, c.second) || !valid_civil(c)) {
        throw ValidationError("malformed local datetime: '" + s + "'");
    }
    return utc_from_civil(c) - static_cast<std::int64_t>(utc_offset_minutes) * 60;
}

CivilDateTime local_view(UtcSeconds t, int utc_offset_minutes) {
    return civil_from_utc(t + static_cast<std::int64_t>(utc_offset_minutes) * 60);
}

int local_weekday(UtcSeconds t, int utc_offset_minutes) {
    std::int64_t shifted = t + static_cast<std::int64_t>(utc_offset_minutes) * 60;
    std::int64_t days = shifted / 86400;
    if (shifted % 86400 < 0) days -= 1;
    return weekday_from_days(days);
}

}  // namespace qlfc
