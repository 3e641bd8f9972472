#include "solarev/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "solarev/fleet.hpp"
#include "solarev/pv.hpp"

namespace solarev {

ScenarioInputs prepare_inputs(const ScenarioConfig& config, const RegionProfile& profile, const WeatherYear& weather,
                              const HourlySeries& base_demand) {
  validate_scenario(config);
  validate_region(profile);
  ScenarioInputs in;
  in.profile = profile;
  in.weather = scale_irradiance(weather, config.irradiance_scale);
  in.specific_generation = generation_series(in.weather, pv_array_from(config, 1.0));
  in.base_demand = validate_series(base_demand);
  in.demand = build_scenario_demand(in.base_demand, config, profile);
  in.dispatch = dispatch_settings_from(config, profile, weather.start_year());
  return in;
}

ScenarioResult run_scenario_detailed(const ScenarioConfig& config, const ScenarioInputs& in,
                                     const HourObserver& observer) {
  validate_scenario(config);
  const RegionProfile& p = in.profile;
  const double capacity =
      coverage_to_capacity(p.roof_area, config.coverage, config.panel_area_per_kw, config.max_coverage);

  HourlySeries gen = in.specific_generation;
  gen.values = capacity * in.specific_generation.values;

  std::optional<FleetState> fleet;
  if (in.dispatch.fleet) fleet = initial_fleet_state(*in.dispatch.fleet);

  ScenarioResult r;
  r.horizon = simulate_horizon(gen, in.demand, fleet, in.dispatch, config.horizon, config.pv_degradation, observer);

  LedgerInputs li;
  li.capacity_kw = capacity;
  li.fleet_nameplate_kwh = in.dispatch.fleet ? in.dispatch.fleet->nameplate() : 0.0;
  li.n_vehicles = in.dispatch.fleet ? in.dispatch.fleet->n_vehicles : 0.0;
  li.base_annual_load = in.base_demand.sum();
  r.ledger = build_cashflows(r.horizon, config, p, li, false);
  r.ledger_incl_fuel = build_cashflows(r.horizon, config, p, li, true);

  IndicatorSet& s = r.indicators;
  s.coverage = config.coverage;
  s.capacity_kw = capacity;
  // The pool starts half full. Whatever of that opening charge is spent
  // during year 1 was not supplied by PV, so the indicators count it as grid.
  FlowTotals year1 = r.horizon.annual.front();
  if (fleet) {
    const double spent = std::max(0.0, fleet->energy - r.horizon.pool_energy_end.front());
    const double startup = std::min(year1.values[BattToLoad], in.dispatch.fleet->efficiency * spent);
    year1.values[BattToLoad] -= startup;
    year1.values[GridToLoad] += startup;
  }
  const EnergyIndicators e = energy_indicators(year1);
  s.self_consumption = e.self_consumption;
  s.self_sufficiency = e.self_sufficiency;
  s.energy_sufficiency = e.energy_sufficiency;

  const double base_npv = npv(r.ledger.base_cost(), config.discount_rate);
  const double base_npv_fuel = npv(r.ledger_incl_fuel.base_cost(), config.discount_rate);
  s.scenario_npv_cost = npv(r.ledger.scenario_cost(), config.discount_rate);
  s.scenario_npv_cost_incl_fuel = npv(r.ledger_incl_fuel.scenario_cost(), config.discount_rate);
  s.npv_savings = base_npv - s.scenario_npv_cost;
  s.npv_savings_incl_fuel = base_npv_fuel - s.scenario_npv_cost_incl_fuel;
  s.base_annual_cost = r.ledger.base_cost()[1];
  s.base_annual_cost_incl_fuel = r.ledger_incl_fuel.base_cost()[1];
  s.cost_saving_pct = cost_saving_pct(s.scenario_npv_cost, config.horizon, s.base_annual_cost);
  s.cost_saving_pct_incl_fuel =
      cost_saving_pct(s.scenario_npv_cost_incl_fuel, config.horizon, s.base_annual_cost_incl_fuel);

  const Co2Metrics co2 = co2_metrics(year1, li.base_annual_load, p, config.fuel, config.system);
  s.co2_reduction_pct = co2.reduction_pct;
  s.co2_abatement_per_kwh = co2.abatement_per_kwh;
  s.capacity_factor = capacity_factor(in.specific_generation, 1.0);
  return r;
}

IndicatorSet run_scenario(const ScenarioConfig& config, const RegionProfile& profile, const WeatherYear& weather,
                          const HourlySeries& base_demand) {
  return run_scenario_detailed(config, prepare_inputs(config, profile, weather, base_demand)).indicators;
}

std::size_t argmax_npv(const std::vector<IndicatorSet>& points) {
  if (points.empty()) throw ValidationError("empty sweep");
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& a = points[i];
    const auto& b = points[best];
    if (a.npv_savings > b.npv_savings || (a.npv_savings == b.npv_savings && a.capacity_kw < b.capacity_kw)) best = i;
  }
  return best;
}

SweepResult sweep_coverage(const ScenarioConfig& base, const ScenarioInputs& inputs, const std::vector<double>& grid,
                           int threads) {
  if (grid.empty()) throw ValidationError("coverage grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ValidationError("coverage grid must be strictly increasing");
  }
  for (double c : grid) {
    if (!(c >= 0.0 && c <= base.max_coverage)) {
      throw ValidationError("coverage grid point " + std::to_string(c) + " outside [0, max_coverage]");
    }
  }

  SweepResult out;
  out.points.resize(grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        ScenarioConfig c = base;
        c.coverage = grid[i];
        out.points[i] = run_scenario_detailed(c, inputs).indicators;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int n_threads = std::clamp(threads, 1, static_cast<int>(grid.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  out.optimum = argmax_npv(out.points);
  return out;
}

SweepResult sweep_coverage(const ScenarioConfig& base, const RegionProfile& profile, const WeatherYear& weather,
                           const HourlySeries& base_demand, const std::vector<double>& grid, int threads) {
  return sweep_coverage(base, prepare_inputs(base, profile, weather, base_demand), grid, threads);
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("grid '" + spec + "' has an unparseable number '" + item + "'");
    }
  }
  if (parts.size() != 3) throw ValidationError("grid must be START:STOP:STEP, got '" + spec + "'");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || !(stop >= start)) throw ValidationError("grid needs STEP > 0 and STOP >= START");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) grid.push_back(std::round((start + static_cast<double>(i) * step) * 1e10) / 1e10);
  return grid;
}

RegionProfile swap_structure(const RegionProfile& donor, const RegionProfile& host) {
  validate_region(donor);
  validate_region(host);
  const double scale = host.population / donor.population;
  RegionProfile r = host;
  r.name = host.name + "-with-" + donor.name + "-structure";
  r.annual_demand = donor.annual_demand * scale;
  r.n_vehicles = donor.n_vehicles * scale;
  r.n_gasoline = donor.n_gasoline * scale;
  r.n_diesel = donor.n_diesel * scale;
  r.weekday_use_fraction = donor.weekday_use_fraction;
  r.avg_km_per_car_day = donor.avg_km_per_car_day;
  r.roof_area = donor.roof_area * scale;
  return r;
}

IndicatorSet sensitivity_swap(const RegionProfile& donor, const RegionProfile& host, const WeatherYear& host_weather,
                              const HourlySeries& host_base_demand, const ScenarioConfig& config) {
  const RegionProfile swapped = swap_structure(donor, host);
  if (!(host.annual_demand > 0.0)) throw ValidationError("host region needs a positive annual demand");
  HourlySeries demand = host_base_demand;
  demand.values *= swapped.annual_demand / host.annual_demand;
  return run_scenario(config, swapped, host_weather, demand);
}

}  // namespace solarev
