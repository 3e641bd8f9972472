#include "solarev/calendar.hpp"

#include <chrono>

namespace solarev {

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int jan1_weekday(int year) {
  using namespace std::chrono;
  const weekday wd{sys_days{std::chrono::year{year} / January / 1}};
  return static_cast<int>(wd.c_encoding());
}

HourStamp stamp_hour(int hour_index, int year) {
  HourStamp s{};
  s.day_of_year = hour_index / 24;
  s.hour_of_day = hour_index % 24;

  int day = s.day_of_year;
  int month = 0;
  while (month < 11 && day >= kMonthDays[month]) {
    day -= kMonthDays[month];
    ++month;
  }
  s.month = month;
  s.day_of_month = day + 1;

  // Days elapsed on the real calendar; skipped Feb 29 still advances the week.
  const int skipped = (is_leap_year(year) && s.day_of_year >= 59) ? 1 : 0;
  s.actual_day_of_year = s.day_of_year + skipped + 1;
  s.weekday = (jan1_weekday(year) + s.day_of_year + skipped) % 7;
  return s;
}

std::array<int, 12> month_start_hours() {
  std::array<int, 12> starts{};
  int acc = 0;
  for (int m = 0; m < 12; ++m) {
    starts[m] = acc;
    acc += kMonthDays[m] * 24;
  }
  return starts;
}

}  // namespace solarev
