#include "solarev/pv.hpp"

#include <cmath>
#include <numbers>

namespace solarev {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

SolarAngles solar_position(const Site& site, double hour_of_year, int year) {
  const int day = std::clamp(static_cast<int>(std::floor(hour_of_year / 24.0)), 0, kDaysPerYear - 1);
  const double hour = hour_of_year - 24.0 * day;
  const int doy = stamp_hour(day * 24, year).actual_day_of_year;
  const double days_in_year = is_leap_year(year) ? 366.0 : 365.0;

  const double g = 2.0 * std::numbers::pi / days_in_year * (doy - 1 + (hour - 12.0) / 24.0);
  const double eot = 229.18 * (0.000075 + 0.001868 * std::cos(g) - 0.032077 * std::sin(g) -
                               0.014615 * std::cos(2 * g) - 0.040849 * std::sin(2 * g));
  const double decl = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) -
                      0.006758 * std::cos(2 * g) + 0.000907 * std::sin(2 * g) -
                      0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);

  const double solar_minutes = hour * 60.0 + eot + 4.0 * site.longitude - 60.0 * site.utc_offset_hours;
  const double ha = (solar_minutes / 4.0 - 180.0) * kDeg;
  const double lat = site.latitude * kDeg;

  const double cos_z = std::clamp(
      std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(ha), -1.0, 1.0);
  const double zenith = std::acos(cos_z) / kDeg;

  double az = std::atan2(std::sin(ha), std::cos(ha) * std::sin(lat) - std::tan(decl) * std::cos(lat)) / kDeg + 180.0;
  az = std::fmod(az + 360.0, 360.0);
  return {zenith, az};
}

SolarAngles solar_position(const Site& site, int hour_index, int year) {
  return solar_position(site, hour_index + 0.5, year);
}

double poa_irradiance(const WeatherHour& wh, const SolarAngles& sun, double tilt, double azimuth, double albedo) {
  if (tilt == 0.0) return std::max(wh.ghi, 0.0);
  const double beta = tilt * kDeg;
  const double cos_z = std::cos(sun.zenith * kDeg);
  double beam = 0.0;
  if (cos_z > 0.0) {
    const double cos_inc = cos_z * std::cos(beta) +
                           std::sin(sun.zenith * kDeg) * std::sin(beta) * std::cos((sun.azimuth - azimuth) * kDeg);
    beam = wh.dni * std::max(cos_inc, 0.0);
  }
  const double sky = wh.dhi * (1.0 + std::cos(beta)) / 2.0;
  const double ground = wh.ghi * albedo * (1.0 - std::cos(beta)) / 2.0;
  return std::max(beam + sky + ground, 0.0);
}

PvArrayConfig pv_array_from(const ScenarioConfig& c, double capacity_kw) {
  PvArrayConfig a;
  a.capacity = capacity_kw;
  a.tilt = c.tilt;
  a.azimuth = c.azimuth;
  a.system_loss = c.system_loss;
  a.temp_coefficient = c.temp_coefficient;
  a.noct = c.noct;
  a.inverter_efficiency = c.inverter_efficiency;
  a.albedo = c.albedo;
  return a;
}

void validate_array(const PvArrayConfig& a) {
  if (!(a.capacity >= 0)) throw ValidationError("array capacity must be >= 0");
  if (!(a.tilt >= 0 && a.tilt <= 90)) throw ValidationError("array tilt must be in [0, 90]");
  if (!(a.azimuth >= 0 && a.azimuth < 360)) throw ValidationError("array azimuth must be in [0, 360)");
  if (!(a.system_loss >= 0 && a.system_loss < 1)) throw ValidationError("system_loss must be in [0, 1)");
  if (!(a.inverter_efficiency > 0 && a.inverter_efficiency <= 1)) {
    throw ValidationError("inverter_efficiency must be in (0, 1]");
  }
}

HourlySeries generation_series(const WeatherYear& weather, const PvArrayConfig& array) {
  validate_array(array);
  const int year = weather.start_year();
  const Eigen::Index n = weather.ghi.size();
  Eigen::VectorXd specific(n);
  const double derate = (1.0 - array.system_loss) * array.inverter_efficiency;
  for (Eigen::Index h = 0; h < n; ++h) {
    const WeatherHour wh = weather_hour(weather, h);
    if (wh.ghi <= 0.0 && wh.dni <= 0.0 && wh.dhi <= 0.0) {
      specific[h] = 0.0;
      continue;
    }
    const SolarAngles sun = solar_position(weather.site, static_cast<int>(h), year);
    const double poa = poa_irradiance(wh, sun, array.tilt, array.azimuth, array.albedo);
    const double t_cell = wh.temperature + (array.noct - 20.0) / 800.0 * poa;
    const double p = (poa / 1000.0) * (1.0 + array.temp_coefficient * (t_cell - 25.0)) * derate;
    specific[h] = std::clamp(p, 0.0, 1.0);
  }
  return HourlySeries(year, array.capacity * specific, Unit::kWh);
}

double capacity_factor(const HourlySeries& generation, double capacity_kw) {
  if (!(capacity_kw > 0.0)) throw ValidationError("capacity must be > 0 for a capacity factor");
  return generation.sum() / (capacity_kw * static_cast<double>(generation.size()));
}

Eigen::MatrixXd tilt_azimuth_scan(const WeatherYear& weather, const std::vector<double>& tilts,
                                  const std::vector<double>& azimuths, const PvArrayConfig& base) {
  if (tilts.empty() || azimuths.empty()) throw ValidationError("tilt and azimuth grids must be non-empty");
  Eigen::MatrixXd table(static_cast<Eigen::Index>(tilts.size()), static_cast<Eigen::Index>(azimuths.size()));
  for (std::size_t i = 0; i < tilts.size(); ++i) {
    for (std::size_t j = 0; j < azimuths.size(); ++j) {
      PvArrayConfig a = base;
      a.capacity = 1.0;
      a.tilt = tilts[i];
      a.azimuth = azimuths[j];
      table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = generation_series(weather, a).sum();
    }
  }
  return table;
}

std::array<double, 12> monthly_yield(const HourlySeries& generation) {
  if (generation.size() != kHoursPerYear) throw ValidationError("monthly yield needs an 8760-hour series");
  const auto starts = month_start_hours();
  std::array<double, 12> out{};
  for (int m = 0; m < 12; ++m) {
    out[m] = generation.values.segment(starts[m], kMonthDays[m] * 24).sum();
  }
  return out;
}

double calibrate_system_loss(const WeatherYear& weather, PvArrayConfig array, double target_cf, double tolerance) {
  if (!(target_cf > 0 && target_cf < 1)) throw ValidationError("target capacity factor must be in (0, 1)");
  array.capacity = 1.0;
  auto cf_at = [&](double loss) {
    array.system_loss = loss;
    return capacity_factor(generation_series(weather, array), 1.0);
  };
  double lo = 0.0;
  double hi = 0.99;
  if (cf_at(lo) < target_cf || cf_at(hi) > target_cf) {
    throw ValidationError("target capacity factor unreachable with system_loss in [0, 0.99]");
  }
  // Capacity factor decreases monotonically with loss.
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (cf_at(mid) > target_cf) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace solarev
