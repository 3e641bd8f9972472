#pragma once

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "solarev/core.hpp"
#include "solarev/ingest.hpp"
#include "solarev/synthetic.hpp"

namespace solarev::test {

inline std::filesystem::path data_dir() { return SOLAREV_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return SOLAREV_FIXTURE_DIR; }

inline HourlySeries constant_series(double v, Unit unit = Unit::kWh, int year = 2019) {
  return HourlySeries(year, Eigen::VectorXd::Constant(kHoursPerYear, v), unit);
}

inline WeatherYear constant_weather(double ghi, double dni, double dhi, double temp = 20.0, Site site = {}) {
  WeatherYear w;
  w.ghi = constant_series(ghi, Unit::WattsPerSquareMetre);
  w.dni = constant_series(dni, Unit::WattsPerSquareMetre);
  w.dhi = constant_series(dhi, Unit::WattsPerSquareMetre);
  w.temperature = constant_series(temp, Unit::Celsius);
  w.wind_speed = constant_series(1.0, Unit::MetresPerSecond);
  w.site = site;
  return w;
}

// Bundled stand-in data, loaded once per process.
inline const WeatherYear& paris_weather() {
  static const WeatherYear w =
      load_weather((data_dir() / "paris_2019_weather.csv").string(), site_of(region_preset(RegionName::Paris)));
  return w;
}

inline const WeatherYear& kyoto_weather() {
  static const WeatherYear w =
      load_weather((data_dir() / "kyoto_2018_weather.csv").string(), site_of(region_preset(RegionName::Kyoto)));
  return w;
}

inline const HourlySeries& idf_demand() {
  static const HourlySeries d = load_demand((data_dir() / "idf_2019_demand.csv").string());
  return d;
}

inline const HourlySeries& paris_demand() {
  static const HourlySeries d = derive_scaled_demand(idf_demand(), 0.18);
  return d;
}

inline const HourlySeries& kyoto_demand() {
  static const HourlySeries d = load_demand((data_dir() / "kyoto_2018_demand.csv").string());
  return d;
}

// Scratch directory removed at scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("solarev_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

inline double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) / scale;
}

}  // namespace solarev::test
