#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>

#include "solarev/calendar.hpp"
#include "solarev/errors.hpp"

namespace solarev {

enum class Unit { kWh, WattsPerSquareMetre, Celsius, MetresPerSecond, Dimensionless };

std::string_view unit_name(Unit unit);

/// One calendar year of hourly values. After validation the length is
/// exactly 8760 and every entry is finite.
struct HourlySeries {
  int start_year = 2019;
  Eigen::VectorXd values;
  Unit unit = Unit::Dimensionless;

  HourlySeries() = default;
  HourlySeries(int year, Eigen::VectorXd v, Unit u)
      : start_year(year), values(std::move(v)), unit(u) {}

  Eigen::Index size() const { return values.size(); }
  double sum() const { return values.sum(); }
  double operator[](Eigen::Index i) const { return values[i]; }
};

/// Throws ValidationError on wrong length, a non-finite entry (the message
/// names the index) or a negative entry for kWh and W/m² series.
HourlySeries validate_series(HourlySeries series);

/// Structural parameters of a city or region.
struct RegionProfile {
  std::string name;
  double population = 0.0;           // persons
  double roof_area = 0.0;            // m²
  double annual_demand = 0.0;        // kWh/yr
  double n_vehicles = 0.0;
  double n_gasoline = 0.0;
  double n_diesel = 0.0;
  double weekday_use_fraction = 0.0;
  double avg_km_per_car_day = 0.0;   // km per driving car per day
  double grid_emission_factor = 0.0; // kg CO2 / kWh
  double retail_tariff = 0.0;        // €/kWh
  double fit_rate = 0.0;             // €/kWh
  double latitude = 0.0;             // degrees north
  double longitude = 0.0;            // degrees east
  double utc_offset_hours = 0.0;     // local standard time

  double demand_per_capita() const { return annual_demand / population; }
  double vehicles_per_capita() const { return n_vehicles / population; }
  double roof_area_per_capita() const { return roof_area / population; }
};

enum class RegionName { Paris, IleDeFrance, Kyoto };

RegionProfile region_preset(RegionName name);
/// Accepts "Paris", "IleDeFrance" (or "IdF") and "Kyoto", case-insensitive.
RegionProfile region_preset(std::string_view name);
void validate_region(const RegionProfile& profile);
std::string serialize_region(const RegionProfile& profile);
RegionProfile parse_region(std::string_view toml_text);

enum class System { PVOnly, PVEV };
enum class Period { Y2019, Y2030 };
enum class DemandMode { FixedFactor, PerRegionUplift };

std::string_view system_name(System s);
std::string_view period_name(Period p);
int period_year(Period p);
std::string_view demand_mode_name(DemandMode m);

struct FuelAssumptions {
  double gasoline_l_per_100km = 6.5;
  double diesel_l_per_100km = 5.5;
  double gasoline_kg_co2_per_l = 2.31;
  double diesel_kg_co2_per_l = 2.68;
  double gasoline_eur_per_l = 1.55;
  double diesel_eur_per_l = 1.45;

  bool operator==(const FuelAssumptions&) const = default;
};

/// Every knob of one scenario evaluation. Construct through build_scenario
/// so that defaults and validation are applied consistently.
struct ScenarioConfig {
  System system = System::PVEV;
  Period period = Period::Y2030;
  bool fit_enabled = true;

  double coverage = 0.71;
  double max_coverage = 5.0 / 7.0;
  double panel_area_per_kw = 5.0;  // m² per kW of panels

  double pv_capex = 1.31;  // €/W
  double om_cost = 22.5;   // €/kW/yr
  double v2h_capex = 25.0; // €/kWh of fleet battery, PVEV only

  double battery_per_vehicle = 40.0;  // kWh
  double charger_power = 6.0;         // kW per vehicle
  double soc_min = 0.50;
  double soc_max = 0.95;
  double roundtrip_split_efficiency = 0.95;  // per direction

  double discount_rate = 0.025;
  int horizon = 25;
  double pv_degradation = 0.005;
  double battery_fade_per_fce = 0.2 / 3000.0;
  double battery_replacement_cost = 91.0;  // € per battery
  double price_escalation = 0.0;

  double irradiance_scale = 0.8;
  double tilt = 40.0;
  double azimuth = 180.0;
  double system_loss = 0.14;
  double inverter_efficiency = 0.96;
  double temp_coefficient = -0.004;
  double noct = 45.0;
  double albedo = 0.2;

  double ev_efficiency = 17.2;  // kWh/100km
  DemandMode demand_mode = DemandMode::PerRegionUplift;
  double demand_fixed_factor = 1.08;

  int away_start_hour = 8;
  int away_end_hour = 18;
  double weekend_fraction_away = 0.0;

  std::optional<double> export_cap_kw;
  std::optional<double> retail_tariff;  // overrides the region when set
  std::optional<double> fit_rate;

  FuelAssumptions fuel;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses a TOML document, fills unspecified keys with the defaults of the
/// chosen (system, period) and validates the result.
ScenarioConfig build_scenario(std::string_view toml_text);
ScenarioConfig build_scenario_file(const std::string& path);

/// Default configuration for a (system, period) pair.
ScenarioConfig default_scenario(System system, Period period);

void validate_scenario(const ScenarioConfig& config);

std::string serialize_scenario(const ScenarioConfig& config);

double effective_retail_tariff(const ScenarioConfig& c, const RegionProfile& p);
double effective_fit_rate(const ScenarioConfig& c, const RegionProfile& p);

}  // namespace solarev
