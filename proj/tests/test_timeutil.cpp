#include "doctest.h"
#include "pulsemine/error.hpp"
#include "pulsemine/timeutil.hpp"

using namespace pulsemine;

TEST_CASE("iso8601 round trip") {
  const Instant t = parse_iso8601("2016-04-28T13:45:07Z");
  CHECK(format_iso8601(t) == "2016-04-28T13:45:07Z");
  CHECK(parse_iso8601("1970-01-01T00:00:00Z").seconds == 0);
  CHECK(parse_iso8601("2016-04-28T00:00:00Z").seconds == 1461801600);
  CHECK(format_iso8601(Instant{-1}) == "1969-12-31T23:59:59Z");
}

TEST_CASE("iso8601 rejects malformed input") {
  for (const char* bad : {"", "2016-04-28", "2016-04-31T00:00:00Z", "2016-02-30T00:00:00Z",
                          "2016-04-28T24:00:00Z", "2016-04-28 00:00:00Z", "2016-04-28T00:00:00",
                          "2016-13-01T00:00:00Z", "2016-04-28T00:00:00+01:00"}) {
    CHECK_THROWS_AS(parse_iso8601(bad), ParseError);
  }
  CHECK_NOTHROW(parse_iso8601("2016-02-29T00:00:00Z"));
  CHECK_THROWS_AS(parse_iso8601("2015-02-29T00:00:00Z"), ParseError);
}

TEST_CASE("dates parse as midnight UTC") {
  CHECK(parse_instant_or_date("2016-04-30") == parse_iso8601("2016-04-30T00:00:00Z"));
  CHECK(parse_instant_or_date("2016-04-30T05:00:00Z").seconds ==
        parse_iso8601("2016-04-30T00:00:00Z").seconds + 5 * 3600);
}

TEST_CASE("bucket starts") {
  const Instant t = parse_iso8601("2016-04-28T13:45:07Z");
  CHECK(format_iso8601(bucket_start(t, Bucket::day)) == "2016-04-28T00:00:00Z");
  CHECK(format_iso8601(bucket_start(t, Bucket::hour)) == "2016-04-28T13:00:00Z");
  CHECK(format_iso8601(bucket_start(Instant{-1}, Bucket::day)) == "1969-12-31T00:00:00Z");
  CHECK(parse_bucket("hour") == Bucket::hour);
  CHECK(bucket_name(Bucket::day) == "day");
  CHECK_THROWS_AS(parse_bucket("week"), ConfigError);
}
