#pragma once

#include <array>

namespace solarev {

inline constexpr int kHoursPerYear = 8760;
inline constexpr int kDaysPerYear = 365;

inline constexpr std::array<int, 12> kMonthDays = {31, 28, 31, 30, 31, 30,
                                                   31, 31, 30, 31, 30, 31};

bool is_leap_year(int year);

// Position of one hour inside a 365-day year. Leap years have Feb 29
// removed, so day_of_year 59 is always March 1.
struct HourStamp {
  int day_of_year;         // 0..364
  int month;               // 0..11
  int day_of_month;        // 1..31
  int hour_of_day;         // 0..23
  int weekday;             // 0 = Sunday .. 6 = Saturday, actual calendar
  int actual_day_of_year;  // 1-based, counting Feb 29 when present
};

HourStamp stamp_hour(int hour_index, int year);

/// Weekday (0 = Sunday) of January 1st of `year`.
int jan1_weekday(int year);

inline bool is_weekend(int weekday) { return weekday == 0 || weekday == 6; }

/// First hour index of each month in a 365-day year.
std::array<int, 12> month_start_hours();

}  // namespace solarev
