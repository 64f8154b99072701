#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tagtrace/error.hpp"
#include "tagtrace/stats.hpp"
#include "tagtrace/timeutil.hpp"

using namespace tagtrace;

TEST(TimeUtil, EpochSecondsParse) {
  EXPECT_EQ(parse_epoch_seconds("0"), 0);
  EXPECT_EQ(parse_epoch_seconds("1099267200"), 1099267200);
  EXPECT_EQ(parse_epoch_seconds("+5"), 5);
  EXPECT_EQ(parse_epoch_seconds("-5"), -5);
  EXPECT_FALSE(parse_epoch_seconds(""));
  EXPECT_FALSE(parse_epoch_seconds("12a"));
  EXPECT_FALSE(parse_epoch_seconds("1.5"));
}

TEST(TimeUtil, IsoDateOnlyAndFullForms) {
  EXPECT_EQ(parse_iso8601("1970-01-01"), 0);
  EXPECT_EQ(parse_iso8601("2004-11-01"), 1099267200);
  EXPECT_EQ(parse_iso8601("2004-11-01T00:00:01Z"), 1099267201);
  EXPECT_EQ(parse_iso8601("2004-11-01 01:02:03"), 1099267200 + 3723);
  EXPECT_EQ(parse_iso8601("2004-11-04 02:39:07.614139+00"), parse_iso8601("2004-11-04T02:39:07Z"));
}

TEST(TimeUtil, IsoOffsetsShiftToUtc) {
  const auto utc = parse_iso8601("2005-06-01T12:00:00Z");
  ASSERT_TRUE(utc);
  EXPECT_EQ(parse_iso8601("2005-06-01T14:00:00+02"), utc);
  EXPECT_EQ(parse_iso8601("2005-06-01T14:30:00+0230"), utc);
  EXPECT_EQ(parse_iso8601("2005-06-01T07:00:00-05:00"), utc);
}

TEST(TimeUtil, IsoRejectsGarbage) {
  EXPECT_FALSE(parse_iso8601("2005-13-01"));
  EXPECT_FALSE(parse_iso8601("2005-02-30"));
  EXPECT_FALSE(parse_iso8601("2005-02-01X"));
  EXPECT_FALSE(parse_iso8601("2005-02-01T25:00"));
  EXPECT_FALSE(parse_iso8601("2005-02-01T10:00+7"));
  EXPECT_FALSE(parse_iso8601("yesterday"));
}

TEST(TimeUtil, DetectStyle) {
  EXPECT_EQ(detect_timestamp_style("123"), TimestampStyle::epoch_seconds);
  EXPECT_EQ(detect_timestamp_style("2004-11-01"), TimestampStyle::iso8601);
  EXPECT_FALSE(detect_timestamp_style("n/a"));
}

TEST(TimeUtil, UtcDayFloorsAndFormats) {
  EXPECT_EQ(utc_day(0), 0);
  EXPECT_EQ(utc_day(86399), 0);
  EXPECT_EQ(utc_day(86400), 1);
  EXPECT_EQ(utc_day(-1), -1);
  EXPECT_EQ(day_start(utc_day(1099267200 + 500)), 1099267200);
  EXPECT_EQ(format_date(utc_day(1099267200)), "2004-11-01");
  EXPECT_EQ(format_date(0), "1970-01-01");
}

TEST(Stats, SingleValue) {
  const std::vector<double> v{50.0};
  const auto s = stats::summarize(v);
  EXPECT_EQ(s.count, 1u);
  EXPECT_DOUBLE_EQ(s.mean, 50.0);
  EXPECT_DOUBLE_EQ(s.median, 50.0);
  EXPECT_DOUBLE_EQ(s.sd, 0.0);
}

TEST(Stats, PopulationSdAndLowerMedian) {
  const std::vector<double> v{4, 1, 3, 2};
  const auto s = stats::summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.sd, std::sqrt(1.25));
  EXPECT_DOUBLE_EQ(s.median, 2.0);
  EXPECT_DOUBLE_EQ(stats::lower_median(std::vector<double>{0.0, 0.4}), 0.0);
}

TEST(Stats, NearestRankQuantiles) {
  const std::vector<double> sorted{1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_DOUBLE_EQ(stats::nearest_rank(sorted, 0.0), 1);
  EXPECT_DOUBLE_EQ(stats::nearest_rank(sorted, 0.25), 2);
  EXPECT_DOUBLE_EQ(stats::nearest_rank(sorted, 0.5), 4);
  EXPECT_DOUBLE_EQ(stats::nearest_rank(sorted, 0.75), 6);
  EXPECT_DOUBLE_EQ(stats::nearest_rank(sorted, 1.0), 8);
  const auto f = stats::five_number({5, 1, 3});
  EXPECT_DOUBLE_EQ(f.min, 1);
  EXPECT_DOUBLE_EQ(f.q1, 1);
  EXPECT_DOUBLE_EQ(f.median, 3);
  EXPECT_DOUBLE_EQ(f.q3, 5);
  EXPECT_DOUBLE_EQ(f.max, 5);
}

TEST(Stats, EmptyInputThrows) {
  EXPECT_THROW(stats::summarize(std::vector<double>{}), EmptyInputError);
  EXPECT_THROW(stats::five_number({}), EmptyInputError);
}

TEST(Errors, KindsAreStable) {
  EXPECT_EQ(to_string(ErrorKind::io), "io");
  EXPECT_EQ(to_string(ErrorKind::empty_input), "empty_input");
  EXPECT_EQ(to_string(ErrorKind::configuration), "configuration");
  EXPECT_EQ(to_string(ErrorKind::cold_start), "cold_start");
  EXPECT_EQ(to_string(ErrorKind::capacity), "capacity");
  try {
    throw ColdStartError("nobody");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::cold_start);
    EXPECT_STREQ(e.what(), "nobody");
  }
}
