#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>

#include "solarev/core.hpp"
#include "solarev/dispatch.hpp"

namespace solarev {

/// Net present value of a yearly cashflow; entry 0 is undiscounted.
template <typename Derived>
typename Derived::Scalar npv(const Eigen::DenseBase<Derived>& cashflow, typename Derived::Scalar rate) {
  using Scalar = typename Derived::Scalar;
  if (!(rate > Scalar(-1))) throw ValidationError("discount rate must be > -1");
  Scalar total(0);
  Scalar factor(1);
  for (Eigen::Index y = 0; y < cashflow.size(); ++y) {
    total += cashflow.derived().coeff(y) / factor;
    factor *= Scalar(1) + rate;
  }
  return total;
}

/// {1 - (npv / horizon) / base_annual_cost} * 100
template <typename Scalar>
Scalar cost_saving_pct(Scalar npv_cost, int horizon, Scalar base_annual_cost) {
  if (!(base_annual_cost > Scalar(0))) throw ValidationError("base annual energy cost must be > 0");
  if (horizon < 1) throw ValidationError("horizon must be at least one year");
  return (Scalar(1) - (npv_cost / Scalar(horizon)) / base_annual_cost) * Scalar(100);
}

/// Per-year cost components, index 0 = investment year, 1..N = operation.
struct CashflowLedger {
  Eigen::VectorXd pv_capex;
  Eigen::VectorXd v2h_capex;
  Eigen::VectorXd om;
  Eigen::VectorXd grid_purchases;
  Eigen::VectorXd fit_revenue;   // positive amount, subtracted from cost
  Eigen::VectorXd replacements;
  Eigen::VectorXd fuel;
  Eigen::VectorXd base_grid_purchases;
  Eigen::VectorXd base_fuel;

  Eigen::VectorXd scenario_cost() const {
    return pv_capex + v2h_capex + om + grid_purchases - fit_revenue + replacements + fuel;
  }
  Eigen::VectorXd base_cost() const { return base_grid_purchases + base_fuel; }
  int horizon() const { return static_cast<int>(pv_capex.size()) - 1; }
};

struct FuelUse {
  double litres_gasoline = 0.0;
  double litres_diesel = 0.0;

  double cost(const FuelAssumptions& f) const {
    return litres_gasoline * f.gasoline_eur_per_l + litres_diesel * f.diesel_eur_per_l;
  }
  double co2(const FuelAssumptions& f) const {
    return litres_gasoline * f.gasoline_kg_co2_per_l + litres_diesel * f.diesel_kg_co2_per_l;
  }
};

/// Annual fuel burnt if the fleet ran on combustion engines. Fleet km are
/// split by the gasoline/diesel counts; without a split every car is
/// counted as gasoline.
FuelUse annual_fuel_use(const RegionProfile& profile, const FuelAssumptions& fuel);

struct LedgerInputs {
  double capacity_kw = 0.0;
  double fleet_nameplate_kwh = 0.0;  // 0 for PV-only
  double n_vehicles = 0.0;
  double base_annual_load = 0.0;     // kWh/yr before any EV uplift
};

CashflowLedger build_cashflows(const HorizonResult& horizon, const ScenarioConfig& config,
                               const RegionProfile& profile, const LedgerInputs& inputs, bool include_fuel);

struct EnergyIndicators {
  std::optional<double> self_consumption;  // empty when nothing was produced
  double self_sufficiency = 0.0;
  double energy_sufficiency = 0.0;
};

EnergyIndicators energy_indicators(const FlowTotals& flows);

struct Co2Metrics {
  double reduction_pct = 0.0;
  double abatement_per_kwh = 0.0;  // kg CO2 per kWh of demand
  double base_emissions = 0.0;     // kg/yr
  double scenario_emissions = 0.0; // kg/yr
};

Co2Metrics co2_metrics(const FlowTotals& flows, double base_annual_load, const RegionProfile& profile,
                       const FuelAssumptions& fuel, System system);

}  // namespace solarev
