#include <json.hpp>

#include "solarev/report.hpp"
#include "support.hpp"

using namespace solarev;

TEST_SUITE("report") {
  TEST_CASE("number formatting round trips") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(31e6) == "31000000");
    for (double v : {1.0 / 3.0, 2.0e-17, 123456.789, -7.25e9}) CHECK(std::stod(format_number(v)) == v);
  }

  TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  }

  TEST_CASE("atomic writes") {
    test::TempDir dir("report");
    write_file_atomic(dir / "a.txt", "first");
    write_file_atomic(dir / "a.txt", "second");
    CHECK(read_file(dir / "a.txt") == "second");
    CHECK_FALSE(std::filesystem::exists(dir / "a.txt.tmp"));
    CHECK(sha256_file(dir / "a.txt") == sha256_hex("second"));
    CHECK_THROWS_AS(write_file_atomic(dir / "missing" / "a.txt", "x"), IoError);
    CHECK_THROWS_AS(read_file(dir / "nope.txt"), IoError);
  }

  TEST_CASE("currency labels follow the period") {
    CHECK(currency_label(default_scenario(System::PVOnly, Period::Y2019)) == "EUR2019");
    CHECK(currency_label(default_scenario(System::PVEV, Period::Y2030)) == "EUR2030");
  }

  TEST_CASE("indicators json") {
    IndicatorSet s;
    s.capacity_kw = 4.4e6;
    s.self_sufficiency = 0.31;
    const ScenarioConfig c = default_scenario(System::PVEV, Period::Y2030);
    const auto j = nlohmann::json::parse(indicators_json(s, c, region_preset(RegionName::Paris)));
    CHECK(j["region"] == "Paris");
    CHECK(j["currency"] == "EUR2030");
    CHECK(j["self_consumption"].is_null());
    CHECK(j["self_sufficiency"] == 0.31);
    CHECK(j.contains("excluding_fuel"));
    CHECK(j.contains("including_fuel"));
  }

  TEST_CASE("tables") {
    SweepResult sw;
    for (int i = 0; i < 3; ++i) {
      IndicatorSet s;
      s.coverage = 0.1 * i;
      s.self_consumption = 1.0;
      sw.points.push_back(s);
    }
    const ScenarioConfig c = default_scenario(System::PVEV, Period::Y2030);
    const std::string csv = sweep_csv(sw, c);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.find("npv_savings_EUR2030") != std::string::npos);

    IndicatorSet s;
    s.coverage = 0.71;
    s.capacity_kw = 4.402e6;
    s.self_consumption = 1.0;
    s.self_sufficiency = 0.31;
    const std::string table = summary_csv({{"Paris 2030 PV+EV", s}});
    CHECK(table.find("Optimal PV capacity (GW)") != std::string::npos);
    CHECK(table.find("4.4 (71%)") != std::string::npos);

    Eigen::MatrixXd m(2, 2);
    m << 1, 2, 3, 4;
    CHECK(matrix_csv(m, "tilt\\azimuth", {0, 10}, {90, 180}) == "tilt\\azimuth,90,180\n0,1,2\n10,3,4\n");
  }

  TEST_CASE("coherence grids") {
    CoherenceMap map;
    map.periods = Eigen::Vector2d(2.0, 4.0);
    map.coherence = Eigen::MatrixXd::Constant(2, 3, 0.5);
    map.phase = Eigen::MatrixXd::Zero(2, 3);
    map.coi = Eigen::Vector3d(0.0, 1.0, 0.0);
    CHECK_THROWS_AS(coherence_csv(map, CoherenceGrid::Mask), ValidationError);
    map.mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(2, 3, true);
    CHECK(coherence_csv(map, CoherenceGrid::Mask) == "period_h,0,1,2\n2,1,1,1\n4,1,1,1\n");
    CHECK(coherence_csv(map, CoherenceGrid::Coherence) == "period_h,0,1,2\n2,0.5,0.5,0.5\n4,0.5,0.5,0.5\n");
    CHECK(coi_csv(map) == "hour,coi_period_h\n0,0\n1,1\n2,0\n");
  }

  TEST_CASE("manifest") {
    test::TempDir dir("report");
    test::write_text(dir / "in.csv", "demand\n1\n");
    RunManifest m("run", "coverage = 0.5\n");
    m.add_input(dir / "in.csv");
    m.add_parameter("seed", "42");
    m.emit(dir.path(), "out.csv", "a,b\n");
    m.write(dir.path());
    const auto j = nlohmann::json::parse(read_file(dir / "manifest.json"));
    CHECK(j["command"] == "run");
    CHECK(j["config"] == "coverage = 0.5\n");
    CHECK(j["inputs"][0]["sha256"] == sha256_hex("demand\n1\n"));
    CHECK(j["outputs"][0]["file"] == "out.csv");
    CHECK(j["outputs"][0]["sha256"] == sha256_hex("a,b\n"));
    CHECK(j["parameters"]["seed"] == "42");
    CHECK(m.json("T") == m.json("T"));
  }
}
