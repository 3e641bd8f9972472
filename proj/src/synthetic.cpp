#include "solarev/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "solarev/pv.hpp"

namespace solarev {

namespace {

using std::numbers::pi;

// mt19937_64 words turned into doubles by hand so the stream is the same
// with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    double u1 = 0.0;
    do u1 = uniform(); while (u1 <= 0.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * uniform());
  }

 private:
  std::mt19937_64 engine_;
};

double gauss(double x, double centre, double width) {
  const double z = (x - centre) / width;
  return std::exp(-0.5 * z * z);
}

double erbs_diffuse_fraction(double kt) {
  if (kt <= 0.22) return 1.0 - 0.09 * kt;
  if (kt <= 0.80) return 0.9511 - 0.1604 * kt + 4.388 * kt * kt - 16.638 * std::pow(kt, 3) + 12.336 * std::pow(kt, 4);
  return 0.165;
}

std::vector<double> ar1_days(Rng& rng, double phi, double sd) {
  std::vector<double> d(kDaysPerYear);
  double v = rng.normal() * sd;
  for (int i = 0; i < kDaysPerYear; ++i) {
    if (i > 0) v = phi * v + std::sqrt(1.0 - phi * phi) * sd * rng.normal();
    d[static_cast<std::size_t>(i)] = v;
  }
  return d;
}

std::vector<double> daily_mean(const HourlySeries& s) {
  std::vector<double> d(kDaysPerYear, 0.0);
  for (int h = 0; h < kHoursPerYear; ++h) d[static_cast<std::size_t>(h / 24)] += s[h] / 24.0;
  return d;
}

}  // namespace

SyntheticClimate paris_climate() {
  SyntheticClimate c;
  c.site = {48.9, 2.4, 1.0};
  c.year = 2019;
  c.clear_fraction_mean = 0.78;
  c.clear_fraction_amplitude = 0.08;
  return c;
}

SyntheticClimate kyoto_climate() {
  SyntheticClimate c;
  c.site = {35.0, 135.77, 9.0};
  c.year = 2018;
  c.clear_fraction_mean = 0.90;
  c.clear_fraction_amplitude = 0.0;  // the early-summer rainy season flattens the cycle
  c.clear_fraction_sd = 0.22;
  c.temp_mean = 16.0;
  c.temp_seasonal_amplitude = 10.5;
  c.temp_diurnal_amplitude = 4.5;
  c.coldest_day = 20;
  c.wind_mean = 2.2;
  return c;
}

WeatherYear synthetic_weather(const SyntheticClimate& c, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<double> sky = ar1_days(rng, c.clear_fraction_ar1, c.clear_fraction_sd);
  const std::vector<double> warm = ar1_days(rng, 0.7, c.temp_sd);

  Eigen::VectorXd ghi(kHoursPerYear), dni(kHoursPerYear), dhi(kHoursPerYear), temp(kHoursPerYear),
      wind(kHoursPerYear);
  for (int h = 0; h < kHoursPerYear; ++h) {
    const HourStamp st = stamp_hour(h, c.year);
    const double doy = st.day_of_year;
    const double hour = st.hour_of_day + 0.5;

    // Peak clear fraction near the June solstice (day 172).
    const double mean_f = c.clear_fraction_mean + c.clear_fraction_amplitude * std::cos(2.0 * pi * (doy - 172.0) / 365.0);
    const double f = std::clamp(mean_f + sky[st.day_of_year] + c.hourly_sd * rng.normal(), 0.08, 1.0);

    const SolarAngles sun = solar_position(c.site, h, c.year);
    const double cosz = std::cos(sun.zenith * pi / 180.0);
    double g = 0.0, b = 0.0, d = 0.0;
    if (cosz > 0.0) {
      const double clear = 1098.0 * cosz * std::exp(-0.057 / cosz);
      const double extra = 1367.0 * (1.0 + 0.033 * std::cos(2.0 * pi * (doy + 1.0) / 365.0));
      g = f * clear;
      if (cosz < 0.065) {
        d = g;
      } else {
        const double kt = std::clamp(g / (extra * cosz), 0.0, 1.0);
        d = erbs_diffuse_fraction(kt) * g;
        b = std::min((g - d) / cosz, extra);
      }
    }
    ghi[h] = g;
    dni[h] = b;
    dhi[h] = d;

    temp[h] = c.temp_mean - c.temp_seasonal_amplitude * std::cos(2.0 * pi * (doy - c.coldest_day) / 365.0) +
              warm[st.day_of_year] + c.temp_diurnal_amplitude * std::cos(2.0 * pi * (hour - 15.0) / 24.0);
    wind[h] = std::max(0.0, c.wind_mean * (1.0 + 0.4 * rng.normal()));
  }

  WeatherYear w;
  w.ghi = HourlySeries(c.year, ghi, Unit::WattsPerSquareMetre);
  w.dni = HourlySeries(c.year, dni, Unit::WattsPerSquareMetre);
  w.dhi = HourlySeries(c.year, dhi, Unit::WattsPerSquareMetre);
  w.temperature = HourlySeries(c.year, temp, Unit::Celsius);
  w.wind_speed = HourlySeries(c.year, wind, Unit::MetresPerSecond);
  w.site = c.site;
  return validate_weather(std::move(w));
}

HourlySeries synthetic_demand(const WeatherYear& weather, DemandStyle style, double annual_total, std::uint64_t seed) {
  if (!(annual_total > 0.0)) throw ValidationError("annual demand total must be > 0");
  validate_weather(weather);
  Rng rng(seed);
  const int year = weather.start_year();
  const std::vector<double> tday = daily_mean(weather.temperature);

  Eigen::VectorXd v(kHoursPerYear);
  for (int h = 0; h < kHoursPerYear; ++h) {
    const HourStamp st = stamp_hour(h, year);
    const double hr = st.hour_of_day + 0.5;
    const double t = tday[static_cast<std::size_t>(st.day_of_year)];
    double shape = 0.0, level = 0.0;
    if (style == DemandStyle::Paris) {
      shape = 0.72 + 0.22 * gauss(hr, 12.0, 2.8) + 0.30 * gauss(hr, 19.2, 1.8) + 0.08 * gauss(hr, 8.5, 1.5) -
              0.14 * gauss(hr, 4.0, 2.5);
      level = 1.0 + 0.025 * std::max(0.0, 15.5 - t) + 0.004 * std::max(0.0, t - 22.0);
      if (st.month == 7) level *= 0.92;  // August holidays
    } else {
      const double winter = std::clamp((14.0 - t) / 10.0, 0.0, 1.0);
      const double summer = std::clamp((t - 20.0) / 8.0, 0.0, 1.0);
      shape = 0.68 + 0.15 * gauss(hr, 13.5, 4.0) + summer * 0.40 * gauss(hr, 15.0, 3.2) +
              winter * (0.25 * gauss(hr, 9.0, 1.6) + 0.28 * gauss(hr, 19.0, 1.8)) - 0.10 * gauss(hr, 12.4, 0.6) -
              0.14 * gauss(hr, 4.0, 2.5);
      level = 1.0 + 0.02 * std::max(0.0, 14.0 - t) + 0.035 * std::max(0.0, t - 22.0);
    }
    const double weekend = st.weekday == 0 ? 0.85 : (st.weekday == 6 ? 0.90 : 1.0);
    v[h] = std::max(0.05, shape * level * weekend * (1.0 + 0.015 * rng.normal()));
  }
  v *= annual_total / v.sum();
  return validate_series(HourlySeries(year, std::move(v), Unit::kWh));
}

}  // namespace solarev
