#include "solarev/economics.hpp"

#include "solarev/fleet.hpp"

namespace solarev {

FuelUse annual_fuel_use(const RegionProfile& profile, const FuelAssumptions& fuel) {
  const double km = fleet_annual_km(profile);
  const double split = profile.n_gasoline + profile.n_diesel;
  const double gasoline_share = split > 0.0 ? profile.n_gasoline / split : 1.0;
  FuelUse use;
  use.litres_gasoline = km * gasoline_share * fuel.gasoline_l_per_100km / 100.0;
  use.litres_diesel = km * (1.0 - gasoline_share) * fuel.diesel_l_per_100km / 100.0;
  return use;
}

CashflowLedger build_cashflows(const HorizonResult& horizon, const ScenarioConfig& c, const RegionProfile& p,
                               const LedgerInputs& in, bool include_fuel) {
  const int n = horizon.years();
  if (n < 1) throw ValidationError("cashflows need at least one simulated year");
  const auto zeros = Eigen::VectorXd::Zero(n + 1);
  CashflowLedger l{zeros, zeros, zeros, zeros, zeros, zeros, zeros, zeros, zeros};

  const double retail = effective_retail_tariff(c, p);
  const double fit = c.fit_enabled ? effective_fit_rate(c, p) : 0.0;
  const double fuel_cost = include_fuel ? annual_fuel_use(p, c.fuel).cost(c.fuel) : 0.0;

  l.pv_capex[0] = c.pv_capex * 1000.0 * in.capacity_kw;
  if (c.system == System::PVEV) l.v2h_capex[0] = c.v2h_capex * in.fleet_nameplate_kwh;

  for (int y = 1; y <= n; ++y) {
    const FlowTotals& t = horizon.annual[y - 1];
    const double escalation = std::pow(1.0 + c.price_escalation, y - 1);
    l.om[y] = c.om_cost * in.capacity_kw;
    l.grid_purchases[y] = t[GridToLoad] * retail * escalation;
    l.fit_revenue[y] = t[PvToGrid] * fit * escalation;
    l.replacements[y] = horizon.replacements_in_year[y - 1] * c.battery_replacement_cost * in.n_vehicles;
    // EVs burn no fuel; a PV-only city keeps its combustion fleet.
    l.fuel[y] = c.system == System::PVOnly ? fuel_cost : 0.0;
    l.base_grid_purchases[y] = in.base_annual_load * retail * escalation;
    l.base_fuel[y] = fuel_cost;
  }
  return l;
}

EnergyIndicators energy_indicators(const FlowTotals& f) {
  const double load = f[Load];
  if (!(load > 0.0)) throw ValidationError("energy indicators need a positive load");
  const double used = f[PvToLoad] + f[BattToLoad];
  const double produced = used + f[PvToGrid];
  EnergyIndicators e;
  e.energy_sufficiency = produced / load;
  e.self_sufficiency = used / load;
  if (produced > 0.0) e.self_consumption = used / produced;
  return e;
}

Co2Metrics co2_metrics(const FlowTotals& flows, double base_annual_load, const RegionProfile& profile,
                       const FuelAssumptions& fuel, System system) {
  if (!(profile.grid_emission_factor >= 0.0)) throw ValidationError("grid emission factor must be >= 0");
  const EnergyIndicators e = energy_indicators(flows);
  const double fuel_co2 = annual_fuel_use(profile, fuel).co2(fuel);
  Co2Metrics m;
  m.abatement_per_kwh = profile.grid_emission_factor * e.self_sufficiency;
  m.base_emissions = base_annual_load * profile.grid_emission_factor + fuel_co2;
  m.scenario_emissions =
      flows[GridToLoad] * profile.grid_emission_factor + (system == System::PVOnly ? fuel_co2 : 0.0);
  m.reduction_pct = m.base_emissions > 0.0 ? (1.0 - m.scenario_emissions / m.base_emissions) * 100.0 : 0.0;
  return m;
}

}  // namespace solarev
