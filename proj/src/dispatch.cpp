#include "solarev/dispatch.hpp"

#include <algorithm>
#include <cmath>

namespace solarev {

DispatchSettings dispatch_settings_from(const ScenarioConfig& c, const RegionProfile& p, int start_year) {
  DispatchSettings s;
  if (c.system == System::PVEV) {
    s.fleet = fleet_params_from(c, p);
    s.availability = availability_series(availability_profile_from(c, p, start_year));
  }
  s.export_cap = c.export_cap_kw;
  return s;
}

HourResult dispatch_hour(double pv, double load, const std::optional<FleetState>& state,
                         const std::optional<FleetParams>& params, double avail, std::optional<double> export_cap) {
  HourResult r;
  r.state = state;
  HourFlows& f = r.flows;

  f.pv_to_load = std::min(pv, load);
  const double surplus = pv - f.pv_to_load;
  const double deficit = load - f.pv_to_load;

  FleetLimits lim;
  const bool pool = state && params;
  if (pool) lim = fleet_limits(*state, *params, avail);

  double exportable = surplus;
  if (pool && surplus > 0.0 && lim.max_charge > 0.0) {
    f.pv_to_batt = std::min(surplus, lim.max_charge);
    exportable = surplus - f.pv_to_batt;
    r.state->energy = std::min(r.state->energy + params->efficiency * f.pv_to_batt, soc_ceiling(*params, *r.state));
  }
  if (export_cap && exportable > *export_cap) {
    f.pv_to_grid = *export_cap;
    f.curtailed = exportable - *export_cap;
  } else {
    f.pv_to_grid = exportable;
  }

  double residual = deficit;
  if (pool && deficit > 0.0 && lim.max_discharge > 0.0) {
    f.batt_to_load = std::min(deficit, lim.max_discharge);
    residual = deficit - f.batt_to_load;
    r.pool_discharge = f.batt_to_load / params->efficiency;
    r.state->energy = std::max(r.state->energy - r.pool_discharge, soc_floor(*params, *r.state));
  }
  f.grid_to_load = residual;
  return r;
}

YearResult simulate_year(const HourlySeries& generation, const HourlySeries& demand, std::optional<FleetState> fleet,
                         const DispatchSettings& settings, int project_year, bool keep_hourly,
                         const HourObserver& observer) {
  if (generation.size() != demand.size()) {
    throw ValidationError("generation and demand lengths differ: " + std::to_string(generation.size()) + " vs " +
                          std::to_string(demand.size()));
  }
  if (fleet && !settings.fleet) throw ValidationError("fleet state given without fleet parameters");
  if (settings.fleet && !fleet) throw ValidationError("fleet parameters given without a fleet state");
  const Eigen::Index n = generation.size();
  if (fleet && settings.availability.size() != n) {
    throw ValidationError("availability series length does not match the simulation");
  }

  YearResult out;
  if (keep_hourly) out.flows.hourly.resize(n, kFlowColumns);
  FlowRow totals = FlowRow::Zero();

  for (Eigen::Index h = 0; h < n; ++h) {
    const double avail = fleet ? settings.availability[h] : 0.0;
    HourResult r = dispatch_hour(generation[h], demand[h], fleet, settings.fleet, avail, settings.export_cap);
    if (fleet) fleet = apply_degradation(std::move(*r.state), *settings.fleet, r.pool_discharge, project_year);
    const FlowRow row = r.flows.row(demand[h]);
    totals += row;
    if (keep_hourly) out.flows.hourly.row(h) = row;
    if (observer) observer(project_year, static_cast<int>(h), r.flows, fleet);
  }
  out.flows.annual.values = totals;
  out.fleet = std::move(fleet);
  return out;
}

HorizonResult simulate_horizon(const HourlySeries& generation, const HourlySeries& demand,
                               std::optional<FleetState> fleet, const DispatchSettings& settings, int horizon,
                               double pv_degradation, const HourObserver& observer) {
  if (horizon < 1) throw ValidationError("horizon must be at least one year");
  HorizonResult out;
  out.annual.reserve(horizon);
  HourlySeries gen = generation;
  for (int year = 1; year <= horizon; ++year) {
    if (year > 1) gen.values = generation.values * std::pow(1.0 - pv_degradation, year - 1);
    const int before = fleet ? fleet->replacements : 0;
    YearResult yr = simulate_year(gen, demand, std::move(fleet), settings, year, year == 1, observer);
    fleet = std::move(yr.fleet);
    out.annual.push_back(yr.flows.annual);
    out.pv_energy.push_back(gen.sum());
    out.fade_end.push_back(fleet ? fleet->fade : 1.0);
    out.pool_energy_end.push_back(fleet ? fleet->energy : 0.0);
    out.replacements_in_year.push_back(fleet ? fleet->replacements - before : 0);
    if (year == 1) out.first_year = std::move(yr.flows);
  }
  out.final_fleet = std::move(fleet);
  return out;
}

Eigen::Matrix<double, 24, 3> mean_daily_profile(const EnergyFlows& flows) {
  if (flows.hourly.rows() == 0 || flows.hourly.rows() % 24 != 0) {
    throw ValidationError("daily profile needs whole days of hourly flows");
  }
  const Eigen::Index days = flows.hourly.rows() / 24;
  Eigen::Matrix<double, 24, 3> profile = Eigen::Matrix<double, 24, 3>::Zero();
  for (Eigen::Index h = 0; h < flows.hourly.rows(); ++h) {
    const auto hod = h % 24;
    profile(hod, 0) += flows.hourly(h, PvToLoad);
    profile(hod, 1) += flows.hourly(h, BattToLoad);
    profile(hod, 2) += flows.hourly(h, GridToLoad);
  }
  return profile / static_cast<double>(days);
}

}  // namespace solarev
