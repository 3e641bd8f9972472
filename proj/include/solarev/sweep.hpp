#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solarev/core.hpp"
#include "solarev/dispatch.hpp"
#include "solarev/economics.hpp"
#include "solarev/ingest.hpp"

namespace solarev {

/// kW of panels on `coverage` of the roof at `panel_area_per_kw` m²/kW.
template <typename Scalar>
Scalar coverage_to_capacity(Scalar roof_area, Scalar coverage, Scalar panel_area_per_kw = Scalar(5),
                            Scalar max_coverage = Scalar(5) / Scalar(7)) {
  if (!(coverage >= Scalar(0) && coverage <= max_coverage)) {
    throw ValidationError("coverage " + std::to_string(static_cast<double>(coverage)) + " out of range [0, " +
                          std::to_string(static_cast<double>(max_coverage)) + "]");
  }
  return roof_area * coverage / panel_area_per_kw;
}

/// Indicators for one scenario point. The NPV and cost-saving figures are
/// reported both without fuel (the coverage-curve convention) and with the
/// combustion fleet's fuel bill in both ledgers (the summary-table convention).
struct IndicatorSet {
  double coverage = 0.0;
  double capacity_kw = 0.0;
  std::optional<double> self_consumption;
  double self_sufficiency = 0.0;
  double energy_sufficiency = 0.0;
  double npv_savings = 0.0;               // base NPV - scenario NPV, fuel excluded
  double npv_savings_incl_fuel = 0.0;
  double scenario_npv_cost = 0.0;         // fuel excluded
  double scenario_npv_cost_incl_fuel = 0.0;
  double base_annual_cost = 0.0;          // fuel excluded
  double base_annual_cost_incl_fuel = 0.0;
  double cost_saving_pct = 0.0;           // fuel excluded
  double cost_saving_pct_incl_fuel = 0.0;
  double co2_reduction_pct = 0.0;
  double co2_abatement_per_kwh = 0.0;
  double capacity_factor = 0.0;

  bool operator==(const IndicatorSet&) const = default;
};

/// Everything about a region's data that does not depend on coverage.
struct ScenarioInputs {
  RegionProfile profile;
  WeatherYear weather;            // already scaled by irradiance_scale
  HourlySeries specific_generation;  // kWh per kW of panels
  HourlySeries base_demand;
  HourlySeries demand;            // with the EV uplift for PVEV
  DispatchSettings dispatch;
};

ScenarioInputs prepare_inputs(const ScenarioConfig& config, const RegionProfile& profile,
                              const WeatherYear& weather, const HourlySeries& base_demand);

struct ScenarioResult {
  IndicatorSet indicators;
  HorizonResult horizon;
  CashflowLedger ledger;            // fuel excluded
  CashflowLedger ledger_incl_fuel;
};

ScenarioResult run_scenario_detailed(const ScenarioConfig& config, const ScenarioInputs& inputs,
                                     const HourObserver& observer = {});

IndicatorSet run_scenario(const ScenarioConfig& config, const RegionProfile& profile, const WeatherYear& weather,
                          const HourlySeries& base_demand);

struct SweepResult {
  std::vector<IndicatorSet> points;
  std::size_t optimum = 0;  // index into points

  const IndicatorSet& best() const { return points.at(optimum); }
};

/// Evaluates every coverage in `grid` (strictly increasing). The optimum
/// maximises npv_savings; ties go to the smaller capacity. Results do not
/// depend on `threads`.
SweepResult sweep_coverage(const ScenarioConfig& base, const ScenarioInputs& inputs,
                           const std::vector<double>& grid, int threads = 1);

SweepResult sweep_coverage(const ScenarioConfig& base, const RegionProfile& profile, const WeatherYear& weather,
                           const HourlySeries& base_demand, const std::vector<double>& grid, int threads = 1);

std::size_t argmax_npv(const std::vector<IndicatorSet>& points);

/// "START:STOP:STEP", inclusive of STOP when it lies on the grid.
std::vector<double> parse_grid(const std::string& spec);

/// Host region with the donor's structure: per-capita demand, vehicles per
/// capita, driving pattern and roof area per capita, rescaled to the host
/// population. Weather and demand shape stay the host's.
RegionProfile swap_structure(const RegionProfile& donor, const RegionProfile& host);

IndicatorSet sensitivity_swap(const RegionProfile& donor, const RegionProfile& host, const WeatherYear& host_weather,
                              const HourlySeries& host_base_demand, const ScenarioConfig& config);

}  // namespace solarev
