#pragma once

#include <optional>
#include <string>

#include "solarev/core.hpp"

namespace solarev {

/// Geographic anchor used by the solar geometry.
struct Site {
  double latitude = 0.0;
  double longitude = 0.0;
  double utc_offset_hours = 0.0;
};

inline Site site_of(const RegionProfile& p) { return {p.latitude, p.longitude, p.utc_offset_hours}; }

struct WeatherYear {
  HourlySeries ghi;
  HourlySeries dni;
  HourlySeries dhi;
  HourlySeries temperature;
  HourlySeries wind_speed;
  Site site;

  int start_year() const { return ghi.start_year; }
};

/// Checks lengths, shared start year and non-negative irradiance.
WeatherYear validate_weather(WeatherYear w);

/// Reads a weather CSV with header columns ghi,dni,dhi,temp,wind (other
/// columns are ignored). An optional "# year: YYYY" comment sets the start
/// year; a 8784-row leap year has its Feb 29 rows dropped.
WeatherYear load_weather(const std::string& csv_path, const Site& site);

/// Reads a demand CSV with a `demand` column and an optional
/// "# unit: kWh|MWh|MW|GWh" comment (hourly averages in MW equal MWh).
HourlySeries load_demand(const std::string& csv_path);

/// Any numeric column of an hourly CSV (same row-count rules, no unit handling).
HourlySeries load_column(const std::string& csv_path, const std::string& column);

/// Irradiance (GHI, DNI, DHI) times coeff; temperature and wind untouched.
WeatherYear scale_irradiance(const WeatherYear& w, double coeff);

/// Entrywise demand times factor, e.g. 0.18 to go from Ile-de-France to Paris.
HourlySeries derive_scaled_demand(const HourlySeries& source, double factor);

std::string weather_csv(const WeatherYear& w);
std::string demand_csv(const HourlySeries& demand);
void write_weather_csv(const std::string& path, const WeatherYear& w);
void write_demand_csv(const std::string& path, const HourlySeries& demand);

}  // namespace solarev
