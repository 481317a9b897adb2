#include "doctest.h"
#include "qlfc/common.hpp"
#include "qlfc/timeutil.hpp"

using namespace qlfc;

TEST_SUITE("timeutil") {

TEST_CASE("civil anchors") {
    CHECK(days_from_civil(1970, 1, 1) == 0);
    CHECK(weekday_from_days(0) == 4);  // 1970-01-01 was a Thursday
    CHECK(days_from_civil(1969, 12, 31) == -1);
    // 2016 is a leap year
    CHECK(days_from_civil(2016, 3, 1) - days_from_civil(2016, 2, 28) == 2);

    CivilDateTime c = civil_from_utc(utc_from_civil({2016, 2, 29, 12, 30, 7}));
    CHECK(c.year == 2016);
    CHECK(c.month == 2);
    CHECK(c.day == 29);
    CHECK(c.hour == 12);
    CHECK(c.minute == 30);
    CHECK(c.second == 7);
}

TEST_CASE("rfc3339 parse and format round trip") {
    UtcSeconds t = parse_rfc3339("2016-01-02T03:04:05Z");
    CHECK(t == utc_from_civil({2016, 1, 2, 3, 4, 5}));
    CHECK(format_rfc3339(t) == "2016-01-02T03:04:05Z");

    // Offsets shift back to UTC; fractional seconds are discarded.
    CHECK(parse_rfc3339("2016-01-02T06:04:05+03:00") == t);
    CHECK(parse_rfc3339("2016-01-01T22:04:05-05:00") == t);
    CHECK(parse_rfc3339("2016-01-02T03:04:05.997Z") == t);
}

TEST_CASE("rfc3339 rejects malformed input") {
    CHECK_THROWS_AS(parse_rfc3339("2016-01-02T03:04:05"), ValidationError);  // no zone
    CHECK_THROWS_AS(parse_rfc3339("2016-13-02T03:04:05Z"), ValidationError);
    CHECK_THROWS_AS(parse_rfc3339("2016-02-30T03:04:05Z"), ValidationError);
    CHECK_THROWS_AS(parse_rfc3339("2016-01-02 03:04:05Z"), ValidationError);
    CHECK_THROWS_AS(parse_rfc3339(""), ValidationError);
    CHECK_THROWS_AS(parse_rfc3339("2016-01-02T25:04:05Z"), ValidationError);
}

TEST_CASE("local views shift by the configured offset") {
    UtcSeconds t = parse_rfc3339("2016-01-01T22:30:00Z");
    CivilDateTime local = local_view(t, 180);
    CHECK(local.day == 2);  // +03:00 crosses midnight
    CHECK(local.hour == 1);
    CHECK(local.minute == 30);

    // 2016-01-01 was a Friday (0 = Sunday).
    CHECK(local_weekday(t, 0) == 5);
    CHECK(local_weekday(t, 180) == 6);
    CHECK(local_weekday(t, -24 * 60) == 4);
}

TEST_CASE("legacy dump timestamps are forum local") {
    UtcSeconds t = parse_rfc3339("2016-01-01T22:30:00Z");
    CHECK(parse_local_datetime("2016-01-02 01:30:00", 180) == t);
    CHECK(parse_local_datetime("2016-01-01 22:30:00", 0) == t);
    CHECK_THROWS_AS(parse_local_datetime("2016-01-02T01:30:00", 180), ValidationError);
    CHECK_THROWS_AS(parse_local_datetime("02/01/2016 01:30:00", 180), ValidationError);
}

}  // TEST_SUITE
