#include <cmath>

#include "solarev/dispatch.hpp"
#include "solarev/pv.hpp"
#include "oracle_fixture.hpp"
#include "support.hpp"

using namespace solarev;

namespace {

void check_conservation(const FlowRow& r, double pv) {
  const double supply = r[PvToLoad] + r[PvToBatt] + r[PvToGrid] + r[Curtailed];
  const double served = r[PvToLoad] + r[BattToLoad] + r[GridToLoad];
  CHECK(test::rel_err(supply, pv) <= 1e-9);
  CHECK(test::rel_err(served, r[Load]) <= 1e-9);
}

FleetParams one_car() {
  FleetParams p;
  p.n_vehicles = 1;
  return p;
}

}  // namespace

TEST_SUITE("dispatch") {
  TEST_CASE("trivial hours") {
    const FleetParams p = one_car();
    FleetState floor;
    floor.energy = soc_floor(p, floor);
    const HourResult dark = dispatch_hour(0.0, 5.0, floor, p, 1.0);
    CHECK(dark.flows.grid_to_load == 5.0);
    CHECK(dark.flows.batt_to_load == 0.0);
    CHECK(dark.flows.pv_to_load == 0.0);
    CHECK(dark.flows.pv_to_batt == 0.0);
    CHECK(dark.flows.pv_to_grid == 0.0);
    CHECK(dark.state == floor);

    const FleetState mid = initial_fleet_state(p);
    const HourResult even = dispatch_hour(5.0, 5.0, mid, p, 1.0);
    CHECK(even.flows.pv_to_load == 5.0);
    CHECK(even.flows.pv_to_batt + even.flows.pv_to_grid + even.flows.batt_to_load + even.flows.grid_to_load == 0.0);
    CHECK(even.state == mid);

    FleetState nearly_full;
    nearly_full.energy = soc_ceiling(p, nearly_full) - 3.0 * p.efficiency;
    const HourResult sunny = dispatch_hour(10.0, 4.0, nearly_full, p, 1.0);
    CHECK(sunny.flows.pv_to_load == 4.0);
    CHECK(sunny.flows.pv_to_batt == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(sunny.flows.pv_to_grid == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(sunny.state->energy == doctest::Approx(soc_ceiling(p, nearly_full)).epsilon(1e-12));

    const HourResult capped = dispatch_hour(10.0, 4.0, std::nullopt, std::nullopt, 0.0, 2.0);
    CHECK(capped.flows.pv_to_grid == 2.0);
    CHECK(capped.flows.curtailed == 4.0);
  }

  TEST_CASE("hand oracle fixtures") {
    int cases = 0;
    for (const auto& path : test::oracle_fixtures(test::fixture_dir())) {
      const test::OracleCase c = test::read_oracle_case(path);
      ++cases;
      CAPTURE(c.name);
      std::optional<FleetState> state = initial_fleet_state(c.params);
      for (const auto& row : c.rows) {
        const int hour = static_cast<int>(row[0]);
        CAPTURE(hour);
        HourResult r = dispatch_hour(row[1], row[2], state, c.params, row[3], c.export_cap);
        state = apply_degradation(*r.state, c.params, r.pool_discharge);
        const HourFlows& f = r.flows;
        const double got[] = {f.pv_to_load,   f.pv_to_batt, f.pv_to_grid, f.batt_to_load, f.grid_to_load,
                              f.curtailed,    state->energy, state->fade};
        for (int k = 0; k < 8; ++k) {
          CAPTURE(k);
          CHECK(std::abs(got[k] - row[4 + k]) <= 1e-9 * std::max(1.0, std::abs(row[4 + k])));
        }
        CHECK(state->replacements == static_cast<int>(row[12]));
        check_conservation(f.row(row[2]), row[1]);
      }
    }
    CHECK(cases >= 5);
  }

  TEST_CASE("zero capacity and no-storage identities") {
    const HourlySeries& load = test::paris_demand();
    const YearResult none = simulate_year(test::constant_series(0.0), load, std::nullopt, {});
    CHECK(none.flows.annual[GridToLoad] == doctest::Approx(load.sum()).epsilon(1e-12));
    CHECK(none.flows.annual[PvToLoad] == 0.0);

    HourlySeries pv = load;
    pv.values = load.values * 1.5 + Eigen::VectorXd::Constant(kHoursPerYear, 1.0);
    const YearResult over = simulate_year(pv, load, std::nullopt, {});
    CHECK(over.flows.annual[BattToLoad] == 0.0);
    CHECK(over.flows.annual[Curtailed] == 0.0);
    CHECK(test::rel_err(over.flows.annual[PvToGrid], (pv.values - load.values).sum()) < 1e-12);

    const auto profile = mean_daily_profile(none.flows);
    CHECK(profile.col(0).isZero(0.0));
    CHECK(profile.col(1).isZero(0.0));
  }

  TEST_CASE("daily profile partitions the mean day") {
    const ScenarioConfig c = default_scenario(System::PVEV, Period::Y2030);
    const RegionProfile paris = region_preset(RegionName::Paris);
    const DispatchSettings settings = dispatch_settings_from(c, paris, 2019);
    HourlySeries gen = test::constant_series(0.0);
    for (int h = 0; h < kHoursPerYear; ++h) gen.values[h] = (h % 24 >= 9 && h % 24 < 16) ? 4.0e6 : 0.0;
    const YearResult yr =
        simulate_year(gen, test::paris_demand(), initial_fleet_state(*settings.fleet), settings);
    const auto profile = mean_daily_profile(yr.flows);
    CHECK(test::rel_err(profile.sum(), test::paris_demand().sum() / kDaysPerYear) < 1e-12);

    // Direct averaging, hour by hour.
    for (int hod = 0; hod < 24; ++hod) {
      double pv_sum = 0.0, batt_sum = 0.0, grid_sum = 0.0;
      for (int d = 0; d < kDaysPerYear; ++d) {
        pv_sum += yr.flows.hourly(d * 24 + hod, PvToLoad);
        batt_sum += yr.flows.hourly(d * 24 + hod, BattToLoad);
        grid_sum += yr.flows.hourly(d * 24 + hod, GridToLoad);
      }
      CHECK(test::rel_err(profile(hod, 0), pv_sum / kDaysPerYear) < 1e-12);
      CHECK(test::rel_err(profile(hod, 1), batt_sum / kDaysPerYear) < 1e-12);
      CHECK(test::rel_err(profile(hod, 2), grid_sum / kDaysPerYear) < 1e-12);
    }
  }

  TEST_CASE("horizon PV degradation") {
    HourlySeries gen = test::constant_series(0.0);
    for (int h = 0; h < kHoursPerYear; ++h) gen.values[h] = (h % 24 >= 8 && h % 24 < 17) ? 3.0 : 0.0;
    const HourlySeries load = test::constant_series(1.0);
    const HorizonResult flat = simulate_horizon(gen, load, std::nullopt, {}, 25, 0.0);
    for (int y = 1; y < 25; ++y) CHECK(flat.annual[y].values == flat.annual[0].values);

    const HorizonResult aged = simulate_horizon(gen, load, std::nullopt, {}, 25, 0.005);
    CHECK(aged.years() == 25);
    CHECK(test::rel_err(aged.pv_energy[24], aged.pv_energy[0] * std::pow(0.995, 24)) <= 1e-9);
    CHECK(test::rel_err(aged.annual[24].pv_generation(), aged.annual[0].pv_generation() * std::pow(0.995, 24)) <= 1e-9);
  }

  TEST_CASE("125 full cycles a year wear out the pool in year 24") {
    FleetParams p;
    p.n_vehicles = 10;
    p.soc_min = 0.05;
    p.soc_max = 0.95;
    // Each night draws 125/365 of the nameplate from the pool; each day refills it to the ceiling.
    const double drawn = 125.0 * p.nameplate() / kDaysPerYear;
    HourlySeries gen = test::constant_series(0.0);
    HourlySeries load = test::constant_series(0.0);
    for (int d = 0; d < kDaysPerYear; ++d) {
      for (int h = 1; h <= 3; ++h) load.values[d * 24 + h] = drawn * p.efficiency / 3.0;
      for (int h = 11; h <= 16; ++h) gen.values[d * 24 + h] = 50.0;
    }
    DispatchSettings settings;
    settings.fleet = p;
    settings.availability = Eigen::VectorXd::Ones(kHoursPerYear);
    const HorizonResult r = simulate_horizon(gen, load, initial_fleet_state(p), settings, 25, 0.0);
    for (int y = 0; y < 23; ++y) CHECK(r.replacements_in_year[y] == 0);
    CHECK(r.replacements_in_year[23] == 1);
    REQUIRE(r.final_fleet);
    CHECK(r.final_fleet->replacement_years == std::vector<int>{24});
    CHECK(r.annual[0][BattToLoad] == doctest::Approx(125.0 * p.nameplate() * p.efficiency).epsilon(1e-9));
  }

  TEST_CASE("25-year PVEV run keeps both identities and the SOC window") {
    const ScenarioConfig c = default_scenario(System::PVEV, Period::Y2030);
    const RegionProfile paris = region_preset(RegionName::Paris);
    const WeatherYear w = scale_irradiance(test::paris_weather(), c.irradiance_scale);
    const HourlySeries gen = generation_series(w, pv_array_from(c, 4.4e6));
    const HourlySeries load = build_scenario_demand(test::paris_demand(), c, paris);
    const DispatchSettings settings = dispatch_settings_from(c, paris, w.start_year());
    const FleetParams& fp = *settings.fleet;

    long violations = 0;
    double worst = 0.0;
    auto observer = [&](int year, int h, const HourFlows& f, const std::optional<FleetState>& s) {
      const double pv = gen[h] * std::pow(1.0 - c.pv_degradation, year - 1);
      const FlowRow row = f.row(load[h]);
      worst = std::max({worst, test::rel_err(row[PvToLoad] + row[PvToBatt] + row[PvToGrid] + row[Curtailed], pv),
                        test::rel_err(row[PvToLoad] + row[BattToLoad] + row[GridToLoad], load[h])});
      const double lo = soc_floor(fp, *s), hi = soc_ceiling(fp, *s);
      if (s->energy < lo * (1 - 1e-12) || s->energy > hi * (1 + 1e-12)) ++violations;
    };
    const HorizonResult r =
        simulate_horizon(gen, load, initial_fleet_state(fp), settings, c.horizon, c.pv_degradation, observer);
    CHECK(worst <= 1e-9);
    CHECK(violations == 0);
    CHECK(r.years() == 25);
  }
}
