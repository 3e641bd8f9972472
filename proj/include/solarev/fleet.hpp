#pragma once

#include <vector>

#include "solarev/core.hpp"

namespace solarev {

/// Aggregated EV fleet treated as one stationary storage pool. A single
/// state of charge is shared by every car; cars that are away carry their
/// share and bring it back unchanged.
struct FleetParams {
  double n_vehicles = 0.0;
  double capacity_per_vehicle = 40.0;  // kWh nameplate
  double soc_min = 0.50;
  double soc_max = 0.95;
  double charger_power = 6.0;          // kW per vehicle, both directions
  double efficiency = 0.95;            // per direction
  double fade_per_fce = 0.2 / 3000.0;
  double replacement_threshold = 0.8;

  double nameplate() const { return n_vehicles * capacity_per_vehicle; }
};

FleetParams fleet_params_from(const ScenarioConfig& config, const RegionProfile& profile);

struct FleetState {
  double fade = 1.0;        // current / nameplate capacity
  double energy = 0.0;      // kWh stored in the whole pool
  double cumulative_discharge = 0.0;  // kWh drawn from the pool
  int replacements = 0;
  std::vector<int> replacement_years;

  bool operator==(const FleetState&) const = default;
};

/// Pool at the midpoint of its usable window.
FleetState initial_fleet_state(const FleetParams& params);

inline double usable_capacity(const FleetParams& p, const FleetState& s) { return s.fade * p.nameplate(); }
inline double soc_floor(const FleetParams& p, const FleetState& s) { return p.soc_min * usable_capacity(p, s); }
inline double soc_ceiling(const FleetParams& p, const FleetState& s) { return p.soc_max * usable_capacity(p, s); }

struct AvailabilityProfile {
  double weekday_use_fraction = 0.0;
  int away_start_hour = 8;
  int away_end_hour = 18;
  double weekend_fraction_away = 0.0;
  int start_year = 2019;
};

AvailabilityProfile availability_profile_from(const ScenarioConfig& config, const RegionProfile& profile,
                                              int start_year);

/// Share of the fleet plugged in during hour `hour_index`.
double availability(int hour_index, const AvailabilityProfile& profile);

/// 8760 availability fractions for the profile's year.
Eigen::VectorXd availability_series(const AvailabilityProfile& profile);

struct FleetLimits {
  double max_charge = 0.0;     // kWh accepted from the AC side this hour
  double max_discharge = 0.0;  // kWh deliverable to the load this hour
  double headroom = 0.0;       // kWh of storage space in the present sub-pool
  double reserve = 0.0;        // kWh above the floor in the present sub-pool
};

FleetLimits fleet_limits(const FleetState& state, const FleetParams& params, double availability);

/// Adds `discharged` kWh of pool throughput, lowers fade linearly in
/// full-cycle equivalents and replaces the batteries once fade reaches the
/// threshold. Stored energy keeps its state-of-charge fraction.
FleetState apply_degradation(FleetState state, const FleetParams& params, double discharged, int year = 0);

/// kWh/yr of EV charging implied by the fleet statistics.
double ev_annual_energy(const RegionProfile& profile, double efficiency_kwh_per_100km);

/// Vehicle-km driven per year by the whole fleet.
double fleet_annual_km(const RegionProfile& profile);

HourlySeries build_scenario_demand(const HourlySeries& base, const ScenarioConfig& config,
                                   const RegionProfile& profile, DemandMode mode);

inline HourlySeries build_scenario_demand(const HourlySeries& base, const ScenarioConfig& config,
                                          const RegionProfile& profile) {
  return build_scenario_demand(base, config, profile, config.demand_mode);
}

}  // namespace solarev
