#include "solarev/fleet.hpp"

#include <algorithm>

namespace solarev {

FleetParams fleet_params_from(const ScenarioConfig& c, const RegionProfile& p) {
  FleetParams f;
  f.n_vehicles = p.n_vehicles;
  f.capacity_per_vehicle = c.battery_per_vehicle;
  f.soc_min = c.soc_min;
  f.soc_max = c.soc_max;
  f.charger_power = c.charger_power;
  f.efficiency = c.roundtrip_split_efficiency;
  f.fade_per_fce = c.battery_fade_per_fce;
  return f;
}

FleetState initial_fleet_state(const FleetParams& params) {
  FleetState s;
  s.energy = 0.5 * (params.soc_min + params.soc_max) * params.nameplate();
  return s;
}

AvailabilityProfile availability_profile_from(const ScenarioConfig& c, const RegionProfile& p, int start_year) {
  return {p.weekday_use_fraction, c.away_start_hour, c.away_end_hour, c.weekend_fraction_away, start_year};
}

double availability(int hour_index, const AvailabilityProfile& profile) {
  const HourStamp s = stamp_hour(hour_index, profile.start_year);
  const bool away_hours = s.hour_of_day >= profile.away_start_hour && s.hour_of_day < profile.away_end_hour;
  if (!is_weekend(s.weekday) && away_hours) return 1.0 - profile.weekday_use_fraction;
  return 1.0 - profile.weekend_fraction_away;
}

Eigen::VectorXd availability_series(const AvailabilityProfile& profile) {
  Eigen::VectorXd a(kHoursPerYear);
  for (int h = 0; h < kHoursPerYear; ++h) a[h] = availability(h, profile);
  return a;
}

FleetLimits fleet_limits(const FleetState& state, const FleetParams& params, double avail) {
  FleetLimits lim;
  if (avail <= 0.0 || params.n_vehicles <= 0.0) return lim;
  const double power = avail * params.n_vehicles * params.charger_power;  // kWh over one hour
  lim.headroom = std::max(avail * (soc_ceiling(params, state) - state.energy), 0.0);
  lim.reserve = std::max(avail * (state.energy - soc_floor(params, state)), 0.0);
  lim.max_charge = std::min(power, lim.headroom / params.efficiency);
  lim.max_discharge = std::min(power, lim.reserve * params.efficiency);
  return lim;
}

FleetState apply_degradation(FleetState state, const FleetParams& params, double discharged, int year) {
  if (discharged <= 0.0 || params.nameplate() <= 0.0) return state;
  state.cumulative_discharge += discharged;
  const double old_fade = state.fade;
  double fade = old_fade - params.fade_per_fce * (discharged / params.nameplate());
  if (fade <= params.replacement_threshold + 1e-12) {
    state.replacements += 1;
    state.replacement_years.push_back(year);
    fade = 1.0;
  }
  state.fade = fade;
  state.energy *= fade / old_fade;
  state.energy = std::clamp(state.energy, soc_floor(params, state), soc_ceiling(params, state));
  return state;
}

double fleet_annual_km(const RegionProfile& p) {
  return p.n_vehicles * p.weekday_use_fraction * p.avg_km_per_car_day * 365.0;
}

double ev_annual_energy(const RegionProfile& p, double efficiency_kwh_per_100km) {
  if (!(efficiency_kwh_per_100km > 0.0)) throw ValidationError("ev_efficiency must be > 0");
  return fleet_annual_km(p) * efficiency_kwh_per_100km / 100.0;
}

HourlySeries build_scenario_demand(const HourlySeries& base, const ScenarioConfig& c, const RegionProfile& p,
                                   DemandMode mode) {
  if (c.system == System::PVOnly) return base;
  double factor = 1.0;
  switch (mode) {
    case DemandMode::FixedFactor:
      factor = c.demand_fixed_factor;
      break;
    case DemandMode::PerRegionUplift: {
      const double annual = base.sum();
      if (!(annual > 0.0)) throw ValidationError("base demand must have a positive annual total");
      factor = 1.0 + ev_annual_energy(p, c.ev_efficiency) / annual;
      break;
    }
    default:
      throw ValidationError("unknown demand mode");
  }
  HourlySeries out = base;
  out.values *= factor;
  return out;
}

}  // namespace solarev
