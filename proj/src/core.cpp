#include "solarev/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "toml.hpp"

namespace solarev {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

[[noreturn]] void range_error(std::string_view field, double value, std::string_view bound) {
  throw ValidationError("field '" + std::string(field) + "' = " + fmt_num(value) +
                        " out of range: expected " + std::string(bound));
}

void require(bool ok, std::string_view field, double value, std::string_view bound) {
  if (!ok || std::isnan(value)) range_error(field, value, bound);
}

double as_number(const toml::node& node, std::string_view key) {
  if (auto v = node.value_exact<double>()) return *v;
  if (auto i = node.value_exact<int64_t>()) return static_cast<double>(*i);
  throw ValidationError("field '" + std::string(key) + "' must be a number");
}

int as_int(const toml::node& node, std::string_view key) {
  if (auto i = node.value_exact<int64_t>()) return static_cast<int>(*i);
  if (auto v = node.value_exact<double>(); v && std::floor(*v) == *v) return static_cast<int>(*v);
  throw ValidationError("field '" + std::string(key) + "' must be an integer");
}

bool as_bool(const toml::node& node, std::string_view key) {
  if (auto b = node.value_exact<bool>()) return *b;
  throw ValidationError("field '" + std::string(key) + "' must be a boolean");
}

std::string as_string(const toml::node& node, std::string_view key) {
  if (auto s = node.value_exact<std::string>()) return *s;
  throw ValidationError("field '" + std::string(key) + "' must be a string");
}

System parse_system(std::string_view s) {
  const auto l = lower(s);
  if (l == "pvonly" || l == "pv_only") return System::PVOnly;
  if (l == "pvev" || l == "pv_ev" || l == "pv+ev") return System::PVEV;
  throw ValidationError("field 'system' has unknown value '" + std::string(s) +
                        "' (expected PVOnly or PVEV)");
}

Period parse_period(const toml::node& node) {
  int year = 0;
  if (auto s = node.value_exact<std::string>()) {
    try {
      year = std::stoi(*s);
    } catch (const std::exception&) {
      year = 0;
    }
  } else {
    year = as_int(node, "period");
  }
  if (year == 2019) return Period::Y2019;
  if (year == 2030) return Period::Y2030;
  throw ValidationError("field 'period' must be 2019 or 2030, got " + std::to_string(year));
}

DemandMode parse_demand_mode(std::string_view s) {
  const auto l = lower(s);
  if (l == "fixed_factor") return DemandMode::FixedFactor;
  if (l == "per_region_uplift") return DemandMode::PerRegionUplift;
  throw ValidationError("field 'demand_mode' has unknown value '" + std::string(s) +
                        "' (expected fixed_factor or per_region_uplift)");
}

using Setter = std::function<void(ScenarioConfig&, const toml::node&, std::string_view)>;

Setter num(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, const toml::node& n, std::string_view k) { c.*field = as_number(n, k); };
}
Setter integer(int ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, const toml::node& n, std::string_view k) { c.*field = as_int(n, k); };
}
Setter opt_num(std::optional<double> ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, const toml::node& n, std::string_view k) { c.*field = as_number(n, k); };
}
Setter fuel_num(double FuelAssumptions::*field) {
  return [field](ScenarioConfig& c, const toml::node& n, std::string_view k) { c.fuel.*field = as_number(n, k); };
}

const std::map<std::string, Setter, std::less<>>& scenario_setters() {
  static const std::map<std::string, Setter, std::less<>> setters = {
      {"fit_enabled", [](ScenarioConfig& c, const toml::node& n, std::string_view k) { c.fit_enabled = as_bool(n, k); }},
      {"coverage", num(&ScenarioConfig::coverage)},
      {"max_coverage", num(&ScenarioConfig::max_coverage)},
      {"panel_area_per_kw", num(&ScenarioConfig::panel_area_per_kw)},
      {"pv_capex", num(&ScenarioConfig::pv_capex)},
      {"om_cost", num(&ScenarioConfig::om_cost)},
      {"v2h_capex", num(&ScenarioConfig::v2h_capex)},
      {"battery_per_vehicle", num(&ScenarioConfig::battery_per_vehicle)},
      {"charger_power", num(&ScenarioConfig::charger_power)},
      {"soc_min", num(&ScenarioConfig::soc_min)},
      {"soc_max", num(&ScenarioConfig::soc_max)},
      {"roundtrip_split_efficiency", num(&ScenarioConfig::roundtrip_split_efficiency)},
      {"discount_rate", num(&ScenarioConfig::discount_rate)},
      {"horizon", integer(&ScenarioConfig::horizon)},
      {"pv_degradation", num(&ScenarioConfig::pv_degradation)},
      {"battery_fade_per_fce", num(&ScenarioConfig::battery_fade_per_fce)},
      {"battery_replacement_cost", num(&ScenarioConfig::battery_replacement_cost)},
      {"price_escalation", num(&ScenarioConfig::price_escalation)},
      {"irradiance_scale", num(&ScenarioConfig::irradiance_scale)},
      {"tilt", num(&ScenarioConfig::tilt)},
      {"azimuth", num(&ScenarioConfig::azimuth)},
      {"system_loss", num(&ScenarioConfig::system_loss)},
      {"inverter_efficiency", num(&ScenarioConfig::inverter_efficiency)},
      {"temp_coefficient", num(&ScenarioConfig::temp_coefficient)},
      {"noct", num(&ScenarioConfig::noct)},
      {"albedo", num(&ScenarioConfig::albedo)},
      {"ev_efficiency", num(&ScenarioConfig::ev_efficiency)},
      {"demand_mode", [](ScenarioConfig& c, const toml::node& n, std::string_view k) {
         c.demand_mode = parse_demand_mode(as_string(n, k));
       }},
      {"demand_fixed_factor", num(&ScenarioConfig::demand_fixed_factor)},
      {"away_start_hour", integer(&ScenarioConfig::away_start_hour)},
      {"away_end_hour", integer(&ScenarioConfig::away_end_hour)},
      {"weekend_fraction_away", num(&ScenarioConfig::weekend_fraction_away)},
      {"export_cap_kw", opt_num(&ScenarioConfig::export_cap_kw)},
      {"retail_tariff", opt_num(&ScenarioConfig::retail_tariff)},
      {"fit_rate", opt_num(&ScenarioConfig::fit_rate)},
  };
  return setters;
}

const std::map<std::string, Setter, std::less<>>& fuel_setters() {
  static const std::map<std::string, Setter, std::less<>> setters = {
      {"gasoline_l_per_100km", fuel_num(&FuelAssumptions::gasoline_l_per_100km)},
      {"diesel_l_per_100km", fuel_num(&FuelAssumptions::diesel_l_per_100km)},
      {"gasoline_kg_co2_per_l", fuel_num(&FuelAssumptions::gasoline_kg_co2_per_l)},
      {"diesel_kg_co2_per_l", fuel_num(&FuelAssumptions::diesel_kg_co2_per_l)},
      {"gasoline_eur_per_l", fuel_num(&FuelAssumptions::gasoline_eur_per_l)},
      {"diesel_eur_per_l", fuel_num(&FuelAssumptions::diesel_eur_per_l)},
  };
  return setters;
}

toml::table parse_toml(std::string_view text) {
  try {
    return toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "config parse error: " << e.description() << " at line " << e.source().begin.line;
    throw ValidationError(os.str());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::string_view unit_name(Unit unit) {
  switch (unit) {
    case Unit::kWh: return "kWh";
    case Unit::WattsPerSquareMetre: return "W/m2";
    case Unit::Celsius: return "degC";
    case Unit::MetresPerSecond: return "m/s";
    case Unit::Dimensionless: return "1";
  }
  return "?";
}

HourlySeries validate_series(HourlySeries series) {
  if (series.size() != kHoursPerYear) {
    throw ValidationError("series length " + std::to_string(series.size()) + ": expected " +
                          std::to_string(kHoursPerYear));
  }
  const bool nonneg = series.unit == Unit::kWh || series.unit == Unit::WattsPerSquareMetre;
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    const double v = series.values[i];
    if (!std::isfinite(v)) {
      throw ValidationError("non-finite value at index " + std::to_string(i));
    }
    if (nonneg && v < 0.0) {
      throw ValidationError("negative value " + fmt_num(v) + " at index " + std::to_string(i) +
                            " for non-negative unit " + std::string(unit_name(series.unit)));
    }
  }
  return series;
}

// ---------------------------------------------------------------- presets

RegionProfile region_preset(RegionName name) {
  RegionProfile p;
  switch (name) {
    case RegionName::Paris:
      p.name = "Paris";
      p.population = 2.18e6;
      p.roof_area = 31e6;
      p.annual_demand = 2.18e6 * 6031.0;
      p.n_vehicles = 585e3;
      p.n_gasoline = 334e3;
      p.n_diesel = 250e3;
      p.weekday_use_fraction = 0.35;
      p.avg_km_per_car_day = 21.8;
      p.grid_emission_factor = 0.063;
      p.retail_tariff = 0.16;
      p.fit_rate = 0.04;
      p.latitude = 48.9;
      p.longitude = 2.4;
      p.utc_offset_hours = 1.0;
      break;
    case RegionName::IleDeFrance:
      p.name = "IleDeFrance";
      p.population = 12.2e6;
      p.roof_area = 402e6;
      p.annual_demand = 12.2e6 * 6277.0;
      p.n_vehicles = 5327e3;
      p.n_gasoline = 2525e3;
      p.n_diesel = 2802e3;
      p.weekday_use_fraction = 0.63;
      p.avg_km_per_car_day = 26.3;
      p.grid_emission_factor = 0.063;
      p.retail_tariff = 0.16;
      p.fit_rate = 0.04;
      p.latitude = 49.0;
      p.longitude = 2.5;
      p.utc_offset_hours = 1.0;
      break;
    case RegionName::Kyoto:
      p.name = "Kyoto";
      p.population = 1.47e6;
      p.roof_area = 52e6;
      p.annual_demand = 1.47e6 * 5678.0;
      p.n_vehicles = 485e3;
      // No fuel split and no weekday use share are published for Kyoto.
      p.n_gasoline = 0.0;
      p.n_diesel = 0.0;
      p.weekday_use_fraction = 0.35;
      p.avg_km_per_car_day = 8.0;
      p.grid_emission_factor = 0.352;
      p.retail_tariff = 0.16;
      p.fit_rate = 0.04;
      p.latitude = 35.0;
      p.longitude = 135.77;
      p.utc_offset_hours = 9.0;
      break;
  }
  return p;
}

RegionProfile region_preset(std::string_view name) {
  const auto l = lower(name);
  if (l == "paris") return region_preset(RegionName::Paris);
  if (l == "iledefrance" || l == "idf" || l == "ile-de-france") return region_preset(RegionName::IleDeFrance);
  if (l == "kyoto") return region_preset(RegionName::Kyoto);
  throw ValidationError("unknown region preset '" + std::string(name) +
                        "' (expected Paris, IleDeFrance or Kyoto)");
}

void validate_region(const RegionProfile& p) {
  require(p.population > 0, "population", p.population, "> 0");
  require(p.roof_area > 0, "roof_area", p.roof_area, "> 0");
  require(p.annual_demand >= 0, "annual_demand", p.annual_demand, ">= 0");
  require(p.n_vehicles >= 0, "n_vehicles", p.n_vehicles, ">= 0");
  require(p.n_gasoline >= 0, "n_gasoline", p.n_gasoline, ">= 0");
  require(p.n_diesel >= 0, "n_diesel", p.n_diesel, ">= 0");
  if (p.n_gasoline + p.n_diesel > p.n_vehicles) {
    throw ValidationError("n_gasoline + n_diesel <= n_vehicles violated");
  }
  require(p.weekday_use_fraction >= 0 && p.weekday_use_fraction <= 1, "weekday_use_fraction",
          p.weekday_use_fraction, "[0, 1]");
  require(p.avg_km_per_car_day >= 0, "avg_km_per_car_day", p.avg_km_per_car_day, ">= 0");
  require(p.grid_emission_factor >= 0, "grid_emission_factor", p.grid_emission_factor, ">= 0");
  require(p.retail_tariff >= 0, "retail_tariff", p.retail_tariff, ">= 0");
  require(p.fit_rate >= 0, "fit_rate", p.fit_rate, ">= 0");
  require(p.latitude >= -90 && p.latitude <= 90, "latitude", p.latitude, "[-90, 90]");
  require(p.longitude >= -180 && p.longitude <= 180, "longitude", p.longitude, "[-180, 180]");
  require(std::abs(p.utc_offset_hours) <= 14, "utc_offset_hours", p.utc_offset_hours, "[-14, 14]");
}

std::string serialize_region(const RegionProfile& p) {
  toml::table t;
  t.insert("name", p.name);
  t.insert("population", p.population);
  t.insert("roof_area", p.roof_area);
  t.insert("annual_demand", p.annual_demand);
  t.insert("n_vehicles", p.n_vehicles);
  t.insert("n_gasoline", p.n_gasoline);
  t.insert("n_diesel", p.n_diesel);
  t.insert("weekday_use_fraction", p.weekday_use_fraction);
  t.insert("avg_km_per_car_day", p.avg_km_per_car_day);
  t.insert("grid_emission_factor", p.grid_emission_factor);
  t.insert("retail_tariff", p.retail_tariff);
  t.insert("fit_rate", p.fit_rate);
  t.insert("latitude", p.latitude);
  t.insert("longitude", p.longitude);
  t.insert("utc_offset_hours", p.utc_offset_hours);
  std::ostringstream os;
  os << t << '\n';
  return os.str();
}

RegionProfile parse_region(std::string_view text) {
  const toml::table t = parse_toml(text);
  RegionProfile p;
  const std::map<std::string, double RegionProfile::*, std::less<>> fields = {
      {"population", &RegionProfile::population},
      {"roof_area", &RegionProfile::roof_area},
      {"annual_demand", &RegionProfile::annual_demand},
      {"n_vehicles", &RegionProfile::n_vehicles},
      {"n_gasoline", &RegionProfile::n_gasoline},
      {"n_diesel", &RegionProfile::n_diesel},
      {"weekday_use_fraction", &RegionProfile::weekday_use_fraction},
      {"avg_km_per_car_day", &RegionProfile::avg_km_per_car_day},
      {"grid_emission_factor", &RegionProfile::grid_emission_factor},
      {"retail_tariff", &RegionProfile::retail_tariff},
      {"fit_rate", &RegionProfile::fit_rate},
      {"latitude", &RegionProfile::latitude},
      {"longitude", &RegionProfile::longitude},
      {"utc_offset_hours", &RegionProfile::utc_offset_hours},
  };
  for (const auto& [key, node] : t) {
    const std::string_view k = key.str();
    if (k == "name") {
      p.name = as_string(node, k);
      continue;
    }
    auto it = fields.find(k);
    if (it == fields.end()) throw ValidationError("unknown key: " + std::string(k));
    p.*(it->second) = as_number(node, k);
  }
  for (const auto& [key, member] : fields) {
    if (!t.contains(key)) throw ValidationError("missing key: " + key);
  }
  validate_region(p);
  return p;
}

// ---------------------------------------------------------------- scenario

std::string_view system_name(System s) { return s == System::PVOnly ? "PVOnly" : "PVEV"; }
std::string_view period_name(Period p) { return p == Period::Y2019 ? "2019" : "2030"; }
int period_year(Period p) { return p == Period::Y2019 ? 2019 : 2030; }
std::string_view demand_mode_name(DemandMode m) {
  return m == DemandMode::FixedFactor ? "fixed_factor" : "per_region_uplift";
}

ScenarioConfig default_scenario(System system, Period period) {
  ScenarioConfig c;
  c.system = system;
  c.period = period;
  c.pv_capex = period == Period::Y2019 ? 1.9 : 1.31;
  c.v2h_capex = system == System::PVEV ? 25.0 : 0.0;
  return c;
}

void validate_scenario(const ScenarioConfig& c) {
  if (c.system == System::PVEV && c.period == Period::Y2019) {
    throw ValidationError("inconsistent combination: system PVEV is only defined for period 2030");
  }
  if (c.system == System::PVOnly && c.v2h_capex != 0.0) {
    throw ValidationError("inconsistent combination: v2h_capex set for system PVOnly");
  }
  require(c.max_coverage > 0 && c.max_coverage <= 1, "max_coverage", c.max_coverage, "(0, 1]");
  require(c.coverage >= 0 && c.coverage <= c.max_coverage, "coverage", c.coverage,
          "[0, max_coverage = " + fmt_num(c.max_coverage) + "]");
  require(c.panel_area_per_kw > 0, "panel_area_per_kw", c.panel_area_per_kw, "> 0");
  require(c.pv_capex >= 0, "pv_capex", c.pv_capex, ">= 0");
  require(c.om_cost >= 0, "om_cost", c.om_cost, ">= 0");
  require(c.v2h_capex >= 0, "v2h_capex", c.v2h_capex, ">= 0");
  require(c.battery_per_vehicle > 0, "battery_per_vehicle", c.battery_per_vehicle, "> 0");
  require(c.charger_power > 0, "charger_power", c.charger_power, "> 0");
  require(c.soc_min >= 0, "soc_min", c.soc_min, ">= 0");
  require(c.soc_max <= 1, "soc_max", c.soc_max, "<= 1");
  if (!(c.soc_min < c.soc_max)) throw ValidationError("soc_min < soc_max violated");
  require(c.roundtrip_split_efficiency > 0 && c.roundtrip_split_efficiency <= 1,
          "roundtrip_split_efficiency", c.roundtrip_split_efficiency, "(0, 1]");
  require(c.discount_rate > -1 && c.discount_rate <= 1, "discount_rate", c.discount_rate, "(-1, 1]");
  require(c.horizon >= 1 && c.horizon <= 100, "horizon", c.horizon, "[1, 100]");
  require(c.pv_degradation >= 0 && c.pv_degradation < 1, "pv_degradation", c.pv_degradation, "[0, 1)");
  require(c.battery_fade_per_fce >= 0 && c.battery_fade_per_fce < 1, "battery_fade_per_fce",
          c.battery_fade_per_fce, "[0, 1)");
  require(c.battery_replacement_cost >= 0, "battery_replacement_cost", c.battery_replacement_cost, ">= 0");
  require(c.price_escalation > -1 && c.price_escalation <= 1, "price_escalation", c.price_escalation, "(-1, 1]");
  require(c.irradiance_scale > 0 && c.irradiance_scale <= 1.5, "irradiance_scale", c.irradiance_scale, "(0, 1.5]");
  require(c.tilt >= 0 && c.tilt <= 90, "tilt", c.tilt, "[0, 90]");
  require(c.azimuth >= 0 && c.azimuth < 360, "azimuth", c.azimuth, "[0, 360)");
  require(c.system_loss >= 0 && c.system_loss < 1, "system_loss", c.system_loss, "[0, 1)");
  require(c.inverter_efficiency > 0 && c.inverter_efficiency <= 1, "inverter_efficiency",
          c.inverter_efficiency, "(0, 1]");
  require(c.temp_coefficient >= -0.1 && c.temp_coefficient <= 0.1, "temp_coefficient",
          c.temp_coefficient, "[-0.1, 0.1]");
  require(c.noct > 20 && c.noct <= 100, "noct", c.noct, "(20, 100]");
  require(c.albedo >= 0 && c.albedo <= 1, "albedo", c.albedo, "[0, 1]");
  require(c.ev_efficiency > 0, "ev_efficiency", c.ev_efficiency, "> 0");
  require(c.demand_fixed_factor > 0, "demand_fixed_factor", c.demand_fixed_factor, "> 0");
  require(c.away_start_hour >= 0 && c.away_start_hour < 24, "away_start_hour", c.away_start_hour, "[0, 24)");
  require(c.away_end_hour > c.away_start_hour && c.away_end_hour <= 24, "away_end_hour",
          c.away_end_hour, "(away_start_hour, 24]");
  require(c.weekend_fraction_away >= 0 && c.weekend_fraction_away <= 1, "weekend_fraction_away",
          c.weekend_fraction_away, "[0, 1]");
  if (c.export_cap_kw) require(*c.export_cap_kw >= 0, "export_cap_kw", *c.export_cap_kw, ">= 0");
  if (c.retail_tariff) require(*c.retail_tariff >= 0, "retail_tariff", *c.retail_tariff, ">= 0");
  if (c.fit_rate) require(*c.fit_rate >= 0, "fit_rate", *c.fit_rate, ">= 0");

  const auto& f = c.fuel;
  require(f.gasoline_l_per_100km >= 0, "fuel.gasoline_l_per_100km", f.gasoline_l_per_100km, ">= 0");
  require(f.diesel_l_per_100km >= 0, "fuel.diesel_l_per_100km", f.diesel_l_per_100km, ">= 0");
  require(f.gasoline_kg_co2_per_l >= 0, "fuel.gasoline_kg_co2_per_l", f.gasoline_kg_co2_per_l, ">= 0");
  require(f.diesel_kg_co2_per_l >= 0, "fuel.diesel_kg_co2_per_l", f.diesel_kg_co2_per_l, ">= 0");
  require(f.gasoline_eur_per_l >= 0, "fuel.gasoline_eur_per_l", f.gasoline_eur_per_l, ">= 0");
  require(f.diesel_eur_per_l >= 0, "fuel.diesel_eur_per_l", f.diesel_eur_per_l, ">= 0");
}

ScenarioConfig build_scenario(std::string_view text) {
  const toml::table doc = parse_toml(text);

  System system = System::PVEV;
  Period period = Period::Y2030;
  if (auto* n = doc.get("system")) system = parse_system(as_string(*n, "system"));
  if (auto* n = doc.get("period")) period = parse_period(*n);
  ScenarioConfig c = default_scenario(system, period);

  const auto& setters = scenario_setters();
  for (const auto& [key, node] : doc) {
    const std::string_view k = key.str();
    if (k == "system" || k == "period") continue;
    if (k == "fuel") {
      const auto* fuel = node.as_table();
      if (!fuel) throw ValidationError("field 'fuel' must be a table");
      for (const auto& [fkey, fnode] : *fuel) {
        const std::string_view fk = fkey.str();
        auto it = fuel_setters().find(fk);
        if (it == fuel_setters().end()) throw ValidationError("unknown key: fuel." + std::string(fk));
        it->second(c, fnode, "fuel." + std::string(fk));
      }
      continue;
    }
    auto it = setters.find(k);
    if (it == setters.end()) throw ValidationError("unknown key: " + std::string(k));
    it->second(c, node, k);
  }
  validate_scenario(c);
  return c;
}

ScenarioConfig build_scenario_file(const std::string& path) { return build_scenario(read_text(path)); }

std::string serialize_scenario(const ScenarioConfig& c) {
  toml::table t;
  t.insert("system", std::string(system_name(c.system)));
  t.insert("period", static_cast<int64_t>(period_year(c.period)));
  t.insert("fit_enabled", c.fit_enabled);
  t.insert("coverage", c.coverage);
  t.insert("max_coverage", c.max_coverage);
  t.insert("panel_area_per_kw", c.panel_area_per_kw);
  t.insert("pv_capex", c.pv_capex);
  t.insert("om_cost", c.om_cost);
  if (c.system == System::PVEV) t.insert("v2h_capex", c.v2h_capex);
  t.insert("battery_per_vehicle", c.battery_per_vehicle);
  t.insert("charger_power", c.charger_power);
  t.insert("soc_min", c.soc_min);
  t.insert("soc_max", c.soc_max);
  t.insert("roundtrip_split_efficiency", c.roundtrip_split_efficiency);
  t.insert("discount_rate", c.discount_rate);
  t.insert("horizon", static_cast<int64_t>(c.horizon));
  t.insert("pv_degradation", c.pv_degradation);
  t.insert("battery_fade_per_fce", c.battery_fade_per_fce);
  t.insert("battery_replacement_cost", c.battery_replacement_cost);
  t.insert("price_escalation", c.price_escalation);
  t.insert("irradiance_scale", c.irradiance_scale);
  t.insert("tilt", c.tilt);
  t.insert("azimuth", c.azimuth);
  t.insert("system_loss", c.system_loss);
  t.insert("inverter_efficiency", c.inverter_efficiency);
  t.insert("temp_coefficient", c.temp_coefficient);
  t.insert("noct", c.noct);
  t.insert("albedo", c.albedo);
  t.insert("ev_efficiency", c.ev_efficiency);
  t.insert("demand_mode", std::string(demand_mode_name(c.demand_mode)));
  t.insert("demand_fixed_factor", c.demand_fixed_factor);
  t.insert("away_start_hour", static_cast<int64_t>(c.away_start_hour));
  t.insert("away_end_hour", static_cast<int64_t>(c.away_end_hour));
  t.insert("weekend_fraction_away", c.weekend_fraction_away);
  if (c.export_cap_kw) t.insert("export_cap_kw", *c.export_cap_kw);
  if (c.retail_tariff) t.insert("retail_tariff", *c.retail_tariff);
  if (c.fit_rate) t.insert("fit_rate", *c.fit_rate);

  toml::table fuel;
  fuel.insert("gasoline_l_per_100km", c.fuel.gasoline_l_per_100km);
  fuel.insert("diesel_l_per_100km", c.fuel.diesel_l_per_100km);
  fuel.insert("gasoline_kg_co2_per_l", c.fuel.gasoline_kg_co2_per_l);
  fuel.insert("diesel_kg_co2_per_l", c.fuel.diesel_kg_co2_per_l);
  fuel.insert("gasoline_eur_per_l", c.fuel.gasoline_eur_per_l);
  fuel.insert("diesel_eur_per_l", c.fuel.diesel_eur_per_l);
  t.insert("fuel", std::move(fuel));

  std::ostringstream os;
  os << t << '\n';
  return os.str();
}

double effective_retail_tariff(const ScenarioConfig& c, const RegionProfile& p) {
  return c.retail_tariff.value_or(p.retail_tariff);
}

double effective_fit_rate(const ScenarioConfig& c, const RegionProfile& p) {
  return c.fit_rate.value_or(p.fit_rate);
}

}  // namespace solarev
