#pragma once

#include <array>
#include <vector>

#include "solarev/core.hpp"
#include "solarev/ingest.hpp"

namespace solarev {

struct SolarAngles {
  double zenith;   // degrees from vertical
  double azimuth;  // degrees clockwise from north
};

/// Solar zenith and azimuth at a fractional local-standard-time hour of the
/// (365-day) year. Declination and equation of time follow Spencer's
/// Fourier series.
SolarAngles solar_position(const Site& site, double hour_of_year, int year);

/// Angles at the midpoint of hour `hour_index`.
SolarAngles solar_position(const Site& site, int hour_index, int year);

struct WeatherHour {
  double ghi = 0.0;
  double dni = 0.0;
  double dhi = 0.0;
  double temperature = 20.0;
};

inline WeatherHour weather_hour(const WeatherYear& w, Eigen::Index h) {
  return {w.ghi[h], w.dni[h], w.dhi[h], w.temperature[h]};
}

/// Plane-of-array irradiance, W/m²: beam projection plus isotropic sky
/// diffuse plus ground reflection. A horizontal plane receives GHI.
double poa_irradiance(const WeatherHour& wh, const SolarAngles& sun, double tilt, double azimuth,
                      double albedo = 0.2);

struct PvArrayConfig {
  double capacity = 1.0;  // kW DC
  double tilt = 40.0;
  double azimuth = 180.0;
  double system_loss = 0.14;
  double temp_coefficient = -0.004;  // 1/°C
  double noct = 45.0;
  double inverter_efficiency = 0.96;
  double albedo = 0.2;
};

PvArrayConfig pv_array_from(const ScenarioConfig& config, double capacity_kw);

void validate_array(const PvArrayConfig& a);

/// Hourly AC energy (kWh) for the array. Computed as capacity times the
/// specific (per-kW) output, so it is exactly homogeneous in capacity.
HourlySeries generation_series(const WeatherYear& weather, const PvArrayConfig& array);

/// annual energy / (capacity * 8760)
double capacity_factor(const HourlySeries& generation, double capacity_kw);

/// Annual specific yield in kWh/kW; rows follow `tilts`, columns `azimuths`.
Eigen::MatrixXd tilt_azimuth_scan(const WeatherYear& weather, const std::vector<double>& tilts,
                                  const std::vector<double>& azimuths, const PvArrayConfig& base = {});

std::array<double, 12> monthly_yield(const HourlySeries& generation);

/// Finds the system loss that makes the array reach `target_cf` on this
/// weather year. Throws ValidationError if no loss in [0, 0.99] does.
double calibrate_system_loss(const WeatherYear& weather, PvArrayConfig array, double target_cf,
                             double tolerance = 1e-10);

}  // namespace solarev
