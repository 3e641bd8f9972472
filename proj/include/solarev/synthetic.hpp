#pragma once

#include <cstdint>

#include "solarev/core.hpp"
#include "solarev/ingest.hpp"

namespace solarev {

/// Knobs of the synthetic weather generator. Sky cover is a daily AR(1)
/// clear-sky fraction around a seasonal mean; diffuse/beam split follows
/// the Erbs correlation.
struct SyntheticClimate {
  Site site;
  int year = 2019;
  double clear_fraction_mean = 0.78;  // annual mean of the daily clear-sky fraction
  double clear_fraction_amplitude = 0.08;  // seasonal swing, peak at midsummer
  double clear_fraction_sd = 0.22;    // daily noise
  double clear_fraction_ar1 = 0.55;   // day-to-day persistence
  double hourly_sd = 0.05;            // hour-level flicker
  double temp_mean = 12.5;            // °C
  double temp_seasonal_amplitude = 7.5;
  double temp_diurnal_amplitude = 4.0;
  int coldest_day = 15;               // day of year (0-based)
  double temp_sd = 2.5;               // daily anomaly
  double wind_mean = 3.5;             // m/s
};

SyntheticClimate paris_climate();
SyntheticClimate kyoto_climate();

WeatherYear synthetic_weather(const SyntheticClimate& climate, std::uint64_t seed);

enum class DemandStyle {
  Paris,  // winter peaking, peaks near noon and 19:00
  Kyoto   // summer afternoon peak, two winter peaks, lunch-break dip
};

/// Hourly demand (kWh) driven by the weather year's temperature, scaled so
/// the year sums to `annual_total`.
HourlySeries synthetic_demand(const WeatherYear& weather, DemandStyle style, double annual_total, std::uint64_t seed);

}  // namespace solarev
