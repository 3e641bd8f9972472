#include "solarev/sweep.hpp"
#include "support.hpp"

using namespace solarev;

namespace {

const ScenarioInputs& paris_inputs() {
  static const ScenarioInputs in = prepare_inputs(default_scenario(System::PVEV, Period::Y2030),
                                                  region_preset(RegionName::Paris), test::paris_weather(),
                                                  test::paris_demand());
  return in;
}

IndicatorSet point(double npv_savings, double capacity) {
  IndicatorSet s;
  s.npv_savings = npv_savings;
  s.capacity_kw = capacity;
  return s;
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("coverage to capacity") {
    CHECK(coverage_to_capacity(31e6, 0.0) == 0.0);
    CHECK(coverage_to_capacity(31e6, 0.71) == doctest::Approx(4.40e6).epsilon(0.05 / 4.40));
    CHECK(coverage_to_capacity(52e6, 0.72, 5.0, 1.0) == doctest::Approx(7.488e6));
    CHECK_THROWS_AS(coverage_to_capacity(52e6, 0.72), ValidationError);
    CHECK(coverage_to_capacity(52e6, 0.6) == doctest::Approx(2.0 * coverage_to_capacity(26e6, 0.6)));
    CHECK(coverage_to_capacity(31e6, 0.5) == doctest::Approx(2.0 * coverage_to_capacity(31e6, 0.25)));
    CHECK_THROWS_AS(coverage_to_capacity(31e6, 0.8), ValidationError);
    CHECK_THROWS_AS(coverage_to_capacity(31e6, -0.1), ValidationError);
  }

  TEST_CASE("grid parsing") {
    const std::vector<double> g = parse_grid("0:0.71:0.01");
    CHECK(g.size() == 72);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 0.71);
    CHECK(parse_grid("0.5:0.5:0.1").size() == 1);
    CHECK_THROWS_AS(parse_grid("0:1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:x:0.1"), ValidationError);
    CHECK_THROWS_AS(parse_grid("0:1:0"), ValidationError);
  }

  TEST_CASE("optimum selection") {
    CHECK(argmax_npv({point(1, 10), point(5, 20), point(5, 15), point(2, 30)}) == 2);
    std::vector<IndicatorSet> pts = {point(-3, 0), point(4, 1), point(7, 2), point(6, 3)};
    const std::size_t best = argmax_npv(pts);
    for (auto& p : pts) p.npv_savings *= 3.7;
    CHECK(argmax_npv(pts) == best);
    CHECK_THROWS_AS(argmax_npv({}), ValidationError);

    const SweepResult single =
        sweep_coverage(default_scenario(System::PVEV, Period::Y2030), paris_inputs(), {0.3});
    CHECK(single.optimum == 0);
  }

  TEST_CASE("coverage zero has no PV effect") {
    ScenarioConfig c = default_scenario(System::PVEV, Period::Y2030);
    c.coverage = 0.0;
    const ScenarioResult r = run_scenario_detailed(c, paris_inputs());
    CHECK(r.indicators.self_sufficiency == 0.0);
    CHECK(r.indicators.energy_sufficiency == 0.0);
    CHECK_FALSE(r.indicators.self_consumption);
    CHECK(r.ledger.pv_capex[0] == 0.0);
    CHECK(r.ledger.om.isZero(0.0));
  }

  TEST_CASE("FIT toggle changes money, not energy") {
    ScenarioConfig on = default_scenario(System::PVEV, Period::Y2030);
    on.coverage = 0.7;
    ScenarioConfig off = on;
    off.fit_enabled = false;
    const ScenarioResult a = run_scenario_detailed(on, paris_inputs());
    const ScenarioResult b = run_scenario_detailed(off, paris_inputs());
    CHECK(a.horizon.first_year.hourly == b.horizon.first_year.hourly);
    for (int y = 0; y < a.horizon.years(); ++y) CHECK(a.horizon.annual[y].values == b.horizon.annual[y].values);
    CHECK(b.ledger.fit_revenue.isZero(0.0));
  }

  TEST_CASE("sweep is monotone and thread invariant") {
    const ScenarioConfig base = default_scenario(System::PVEV, Period::Y2030);
    const std::vector<double> grid = parse_grid("0:0.71:0.05");
    const SweepResult one = sweep_coverage(base, paris_inputs(), grid, 1);
    const SweepResult four = sweep_coverage(base, paris_inputs(), grid, 4);
    CHECK(one.optimum == four.optimum);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(one.points[i] == four.points[i]);

    for (std::size_t i = 1; i < grid.size(); ++i) {
      const auto& prev = one.points[i - 1];
      const auto& cur = one.points[i];
      CHECK(cur.self_sufficiency >= prev.self_sufficiency);
      CHECK(cur.energy_sufficiency >= prev.energy_sufficiency);
      if (prev.self_consumption) CHECK(*cur.self_consumption <= *prev.self_consumption);
    }
    CHECK_THROWS_AS(sweep_coverage(base, paris_inputs(), {0.2, 0.1}), ValidationError);
    CHECK_THROWS_AS(sweep_coverage(base, paris_inputs(), {0.9}), ValidationError);
  }

  TEST_CASE("structure swap") {
    const RegionProfile paris = region_preset(RegionName::Paris);
    const RegionProfile kyoto = region_preset(RegionName::Kyoto);
    ScenarioConfig c = default_scenario(System::PVEV, Period::Y2030);
    c.coverage = 0.5;
    const IndicatorSet self = sensitivity_swap(paris, paris, test::paris_weather(), test::paris_demand(), c);
    CHECK(self == run_scenario(c, paris, test::paris_weather(), test::paris_demand()));

    const RegionProfile swapped = swap_structure(kyoto, paris);
    CHECK(swapped.population == paris.population);
    CHECK(swapped.latitude == paris.latitude);
    CHECK(swapped.demand_per_capita() == doctest::Approx(kyoto.demand_per_capita()));
    CHECK(swapped.vehicles_per_capita() == doctest::Approx(kyoto.vehicles_per_capita()));
    CHECK(swapped.roof_area_per_capita() == doctest::Approx(kyoto.roof_area_per_capita()));
    CHECK(swapped.avg_km_per_car_day == kyoto.avg_km_per_car_day);
  }
}
