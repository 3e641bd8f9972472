#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "solarev/core.hpp"
#include "solarev/fleet.hpp"

namespace solarev {

/// Column layout of EnergyFlows::hourly.
enum Flow : Eigen::Index {
  PvToLoad = 0,
  PvToBatt,
  PvToGrid,
  BattToLoad,
  GridToLoad,
  Curtailed,
  Load,
  kFlowColumns
};

inline constexpr const char* kFlowNames[kFlowColumns] = {
    "pv_to_load", "pv_to_batt", "pv_to_grid", "batt_to_load", "grid_to_load", "curtailed", "load"};

using FlowRow = Eigen::Matrix<double, 1, kFlowColumns>;
using FlowMatrix = Eigen::Matrix<double, Eigen::Dynamic, kFlowColumns>;

struct HourFlows {
  double pv_to_load = 0.0;
  double pv_to_batt = 0.0;
  double pv_to_grid = 0.0;
  double batt_to_load = 0.0;
  double grid_to_load = 0.0;
  double curtailed = 0.0;

  FlowRow row(double load) const {
    FlowRow r;
    r << pv_to_load, pv_to_batt, pv_to_grid, batt_to_load, grid_to_load, curtailed, load;
    return r;
  }
};

/// Annual totals, same column order as the hourly matrix.
struct FlowTotals {
  FlowRow values = FlowRow::Zero();

  double operator[](Flow f) const { return values[f]; }
  double pv_generation() const { return values[PvToLoad] + values[PvToBatt] + values[PvToGrid] + values[Curtailed]; }
  double load() const { return values[Load]; }
};

struct EnergyFlows {
  FlowMatrix hourly;  // empty when hourly detail was not requested
  FlowTotals annual;
};

/// Settings the hourly balance needs beyond the two energy series.
struct DispatchSettings {
  std::optional<FleetParams> fleet;        // absent for PV-only systems
  Eigen::VectorXd availability;            // 8760 fractions, used with a fleet
  std::optional<double> export_cap;        // kWh per hour, unlimited when absent
};

DispatchSettings dispatch_settings_from(const ScenarioConfig& config, const RegionProfile& profile, int start_year);

struct HourResult {
  HourFlows flows;
  std::optional<FleetState> state;
  double pool_discharge = 0.0;  // kWh drawn from the pool (before conversion losses)
};

/// One hour of the self-consumption-first balance: PV to load, surplus to
/// the pool, remainder exported (or curtailed beyond the export cap), deficit
/// from the pool, residual deficit from the grid. Degradation is not applied
/// here.
HourResult dispatch_hour(double pv, double load, const std::optional<FleetState>& state,
                         const std::optional<FleetParams>& params, double availability,
                         std::optional<double> export_cap = std::nullopt);

/// Called after every simulated hour with (project year from 1, hour, flows, state).
using HourObserver = std::function<void(int, int, const HourFlows&, const std::optional<FleetState>&)>;

struct YearResult {
  EnergyFlows flows;
  std::optional<FleetState> fleet;
};

YearResult simulate_year(const HourlySeries& generation, const HourlySeries& demand,
                         std::optional<FleetState> fleet, const DispatchSettings& settings,
                         int project_year = 1, bool keep_hourly = true, const HourObserver& observer = {});

struct HorizonResult {
  std::vector<FlowTotals> annual;        // one entry per project year
  std::vector<double> pv_energy;         // kWh generated each year after degradation
  std::vector<double> fade_end;          // fleet fade at the end of each year
  std::vector<double> pool_energy_end;   // kWh stored in the pool at the end of each year
  std::vector<int> replacements_in_year; // battery replacement events per year
  EnergyFlows first_year;                // with hourly detail
  std::optional<FleetState> final_fleet;

  int years() const { return static_cast<int>(annual.size()); }
};

/// Repeats the reference year `horizon` times with PV output scaled by
/// (1 - pv_degradation)^(year - 1) and the fleet carried across years.
HorizonResult simulate_horizon(const HourlySeries& generation, const HourlySeries& demand,
                               std::optional<FleetState> fleet, const DispatchSettings& settings, int horizon,
                               double pv_degradation, const HourObserver& observer = {});

/// Annual-mean supply per hour of day. Columns: pv_to_load, batt_to_load, grid_to_load.
Eigen::Matrix<double, 24, 3> mean_daily_profile(const EnergyFlows& flows);

}  // namespace solarev
