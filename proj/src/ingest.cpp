#include "solarev/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "solarev/report.hpp"

namespace solarev {

namespace {

struct CsvTable {
  std::map<std::string, std::string> meta;  // from "# key: value" lines
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  CsvTable t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string l = trim(line);
    if (l.empty()) continue;
    if (l[0] == '#') {
      const auto colon = l.find(':');
      if (colon != std::string::npos) {
        t.meta[lower(trim(std::string_view(l).substr(1, colon - 1)))] =
            trim(std::string_view(l).substr(colon + 1));
      }
      continue;
    }
    if (t.header.empty()) {
      for (auto& h : split(l)) t.header.push_back(lower(h));
      continue;
    }
    t.rows.push_back(split(l));
    t.line_numbers.push_back(line_no);
  }
  return t;
}

int column_index(const CsvTable& t, const std::string& name) {
  auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) throw ValidationError("missing column " + name);
  return static_cast<int>(it - t.header.begin());
}

double parse_cell(const CsvTable& t, std::size_t row, int col) {
  const auto& cells = t.rows[row];
  const std::string& name = t.header[col];
  if (static_cast<std::size_t>(col) >= cells.size() || cells[col].empty()) {
    throw ValidationError("empty value at row " + std::to_string(row + 1) + " column " + name);
  }
  const std::string& s = cells[col];
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("unparseable value '" + s + "' at row " + std::to_string(row + 1) +
                          " column " + name);
  }
  return v;
}

// Number of data rows after the leap policy; returns the rows to keep.
std::vector<std::size_t> kept_rows(std::size_t n_rows) {
  if (n_rows != static_cast<std::size_t>(kHoursPerYear) && n_rows != 8784) {
    throw ValidationError("row count " + std::to_string(n_rows) + ": expected 8760 (or 8784 for a leap year)");
  }
  std::vector<std::size_t> keep;
  keep.reserve(kHoursPerYear);
  for (std::size_t r = 0; r < n_rows; ++r) {
    // Feb 29 occupies hours 1416..1439 of a leap year.
    if (n_rows == 8784 && r >= 59 * 24 && r < 60 * 24) continue;
    keep.push_back(r);
  }
  return keep;
}

int start_year_of(const CsvTable& t, std::size_t n_rows) {
  if (auto it = t.meta.find("year"); it != t.meta.end()) {
    int year = 0;
    auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), year);
    if (ec != std::errc()) throw ValidationError("unparseable '# year:' header '" + it->second + "'");
    const bool leap = is_leap_year(year);
    if (leap != (n_rows == 8784)) {
      throw ValidationError("row count " + std::to_string(n_rows) + " inconsistent with year " +
                            std::to_string(year));
    }
    return year;
  }
  return n_rows == 8784 ? 2020 : 2019;
}

HourlySeries column_series(const CsvTable& t, int col, const std::vector<std::size_t>& keep, int year,
                           Unit unit, double scale = 1.0) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_cell(t, keep[i], col) * scale;
  return HourlySeries(year, std::move(v), unit);
}

}  // namespace

WeatherYear validate_weather(WeatherYear w) {
  w.ghi = validate_series(std::move(w.ghi));
  w.dni = validate_series(std::move(w.dni));
  w.dhi = validate_series(std::move(w.dhi));
  w.temperature = validate_series(std::move(w.temperature));
  w.wind_speed = validate_series(std::move(w.wind_speed));
  const int y = w.ghi.start_year;
  for (const HourlySeries* s : {&w.dni, &w.dhi, &w.temperature, &w.wind_speed}) {
    if (s->start_year != y) throw ValidationError("weather series do not share a start year");
  }
  return w;
}

WeatherYear load_weather(const std::string& csv_path, const Site& site) {
  const CsvTable t = read_csv(csv_path);
  if (t.rows.empty() && t.header.empty()) throw ValidationError("row count 0: expected 8760");
  const int ghi = column_index(t, "ghi");
  const int dni = column_index(t, "dni");
  const int dhi = column_index(t, "dhi");
  const int temp = column_index(t, "temp");
  const int wind = column_index(t, "wind");
  const auto keep = kept_rows(t.rows.size());
  const int year = start_year_of(t, t.rows.size());

  WeatherYear w;
  w.ghi = column_series(t, ghi, keep, year, Unit::WattsPerSquareMetre);
  w.dni = column_series(t, dni, keep, year, Unit::WattsPerSquareMetre);
  w.dhi = column_series(t, dhi, keep, year, Unit::WattsPerSquareMetre);
  w.temperature = column_series(t, temp, keep, year, Unit::Celsius);
  w.wind_speed = column_series(t, wind, keep, year, Unit::MetresPerSecond);
  w.site = site;
  return validate_weather(std::move(w));
}

HourlySeries load_demand(const std::string& csv_path) {
  const CsvTable t = read_csv(csv_path);
  double scale = 1.0;
  if (auto it = t.meta.find("unit"); it != t.meta.end()) {
    const std::string u = lower(it->second);
    if (u == "kwh") scale = 1.0;
    else if (u == "mwh" || u == "mw") scale = 1e3;
    else if (u == "gwh" || u == "gw") scale = 1e6;
    else throw ValidationError("unknown unit flag '" + it->second + "'");
  }
  if (t.rows.empty()) throw ValidationError("row count 0: expected 8760");
  const int col = column_index(t, "demand");
  const auto keep = kept_rows(t.rows.size());
  const int year = start_year_of(t, t.rows.size());
  return validate_series(column_series(t, col, keep, year, Unit::kWh, scale));
}

HourlySeries load_column(const std::string& csv_path, const std::string& column) {
  const CsvTable t = read_csv(csv_path);
  if (t.rows.empty()) throw ValidationError("row count 0: expected 8760");
  const int col = column_index(t, lower(column));
  const auto keep = kept_rows(t.rows.size());
  const int year = start_year_of(t, t.rows.size());
  return validate_series(column_series(t, col, keep, year, Unit::Dimensionless));
}

WeatherYear scale_irradiance(const WeatherYear& w, double coeff) {
  if (!(coeff > 0.0 && coeff <= 1.5)) {
    throw ValidationError("irradiance coefficient " + std::to_string(coeff) + " out of range (0, 1.5]");
  }
  WeatherYear out = w;
  out.ghi.values *= coeff;
  out.dni.values *= coeff;
  out.dhi.values *= coeff;
  return out;
}

HourlySeries derive_scaled_demand(const HourlySeries& source, double factor) {
  if (!(factor > 0.0)) throw ValidationError("demand factor must be > 0, got " + std::to_string(factor));
  HourlySeries out = source;
  out.values *= factor;
  return out;
}

std::string weather_csv(const WeatherYear& w) {
  std::ostringstream os;
  os.precision(10);
  os << "# year: " << w.start_year() << "\n";
  os << "# site: " << w.site.latitude << " " << w.site.longitude << " UTC" << (w.site.utc_offset_hours >= 0 ? "+" : "")
     << w.site.utc_offset_hours << "\n";
  os << "ghi,dni,dhi,temp,wind\n";
  for (Eigen::Index h = 0; h < w.ghi.size(); ++h) {
    os << w.ghi[h] << ',' << w.dni[h] << ',' << w.dhi[h] << ',' << w.temperature[h] << ','
       << w.wind_speed[h] << '\n';
  }
  return os.str();
}

std::string demand_csv(const HourlySeries& demand) {
  std::ostringstream os;
  os.precision(10);
  os << "# year: " << demand.start_year << "\n# unit: kWh\ndemand\n";
  for (Eigen::Index h = 0; h < demand.size(); ++h) os << demand[h] << '\n';
  return os.str();
}

void write_weather_csv(const std::string& path, const WeatherYear& w) { write_file_atomic(path, weather_csv(w)); }

void write_demand_csv(const std::string& path, const HourlySeries& demand) {
  write_file_atomic(path, demand_csv(demand));
}

}  // namespace solarev
