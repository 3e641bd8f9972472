#include "solarev/report.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "solarev/errors.hpp"

namespace solarev {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " into place");
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[400];
  // Plain decimals for everyday magnitudes, exponents only at the extremes.
  const double a = std::abs(v);
  const auto style = (a >= 1e-6 && a < 1e16) ? std::chars_format::fixed : std::chars_format::scientific;
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, style);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

std::string currency_label(const ScenarioConfig& config) {
  return "EUR" + std::to_string(period_year(config.period));
}

std::string flows_csv(const EnergyFlows& flows) {
  std::string out = "hour";
  for (const char* name : kFlowNames) out += std::string(",") + name;
  out += ",pv_generation\n";
  for (Eigen::Index h = 0; h < flows.hourly.rows(); ++h) {
    const auto r = flows.hourly.row(h);
    out += std::to_string(h);
    for (Eigen::Index c = 0; c < kFlowColumns; ++c) out += ',' + format_number(r[c]);
    out += ',' + format_number(r[PvToLoad] + r[PvToBatt] + r[PvToGrid] + r[Curtailed]) + '\n';
  }
  return out;
}

std::string daily_profile_csv(const Eigen::Matrix<double, 24, 3>& profile, const EnergyFlows& flows) {
  Eigen::Matrix<double, 24, 1> load = Eigen::Matrix<double, 24, 1>::Zero();
  const Eigen::Index days = flows.hourly.rows() / 24;
  for (Eigen::Index h = 0; h < days * 24; ++h) load[h % 24] += flows.hourly(h, Load);
  if (days > 0) load /= static_cast<double>(days);

  std::string out = "hour_of_day,pv_to_load,batt_to_load,grid_to_load,load\n";
  for (int h = 0; h < 24; ++h) {
    out += std::to_string(h);
    for (int c = 0; c < 3; ++c) out += ',' + format_number(profile(h, c));
    out += ',' + format_number(load[h]) + '\n';
  }
  return out;
}

namespace {

ordered_json optional_number(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json indicator_object(const IndicatorSet& s, const ScenarioConfig& c, const RegionProfile& p) {
  ordered_json j;
  j["region"] = p.name;
  j["system"] = system_name(c.system);
  j["period"] = period_name(c.period);
  j["fit_enabled"] = c.fit_enabled;
  j["currency"] = currency_label(c);
  j["coverage"] = s.coverage;
  j["capacity_kw"] = s.capacity_kw;
  j["capacity_factor"] = s.capacity_factor;
  j["self_consumption"] = optional_number(s.self_consumption);
  j["self_sufficiency"] = s.self_sufficiency;
  j["energy_sufficiency"] = s.energy_sufficiency;
  j["excluding_fuel"] = {{"npv_savings", s.npv_savings},
                         {"scenario_npv_cost", s.scenario_npv_cost},
                         {"base_annual_cost", s.base_annual_cost},
                         {"cost_saving_pct", s.cost_saving_pct}};
  j["including_fuel"] = {{"npv_savings", s.npv_savings_incl_fuel},
                         {"scenario_npv_cost", s.scenario_npv_cost_incl_fuel},
                         {"base_annual_cost", s.base_annual_cost_incl_fuel},
                         {"cost_saving_pct", s.cost_saving_pct_incl_fuel}};
  j["co2_reduction_pct"] = s.co2_reduction_pct;
  j["co2_abatement_kg_per_kwh"] = s.co2_abatement_per_kwh;
  return j;
}

}  // namespace

std::string indicators_json(const IndicatorSet& s, const ScenarioConfig& config, const RegionProfile& profile) {
  return indicator_object(s, config, profile).dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& sweep, const ScenarioConfig& config) {
  const std::string cur = currency_label(config);
  std::string out =
      "coverage,capacity_kw,self_consumption,self_sufficiency,energy_sufficiency,npv_savings_" + cur +
      ",scenario_npv_cost_" + cur + ",cost_saving_pct,npv_savings_incl_fuel_" + cur +
      ",cost_saving_pct_incl_fuel,co2_reduction_pct,co2_abatement_kg_per_kwh\n";
  for (const IndicatorSet& s : sweep.points) {
    out += format_number(s.coverage) + ',' + format_number(s.capacity_kw) + ',' +
           (s.self_consumption ? format_number(*s.self_consumption) : std::string()) + ',' +
           format_number(s.self_sufficiency) + ',' + format_number(s.energy_sufficiency) + ',' +
           format_number(s.npv_savings) + ',' + format_number(s.scenario_npv_cost) + ',' +
           format_number(s.cost_saving_pct) + ',' + format_number(s.npv_savings_incl_fuel) + ',' +
           format_number(s.cost_saving_pct_incl_fuel) + ',' + format_number(s.co2_reduction_pct) + ',' +
           format_number(s.co2_abatement_per_kwh) + '\n';
  }
  return out;
}

std::string optimum_json(const SweepResult& sweep, const ScenarioConfig& config, const RegionProfile& profile) {
  ordered_json j;
  j["criterion"] = "max npv_savings excluding fuel, ties to smaller capacity";
  j["index"] = sweep.optimum;
  j["grid_points"] = sweep.points.size();
  j["optimum"] = indicator_object(sweep.best(), config, profile);
  return j.dump(2) + "\n";
}

std::string summary_csv(const std::vector<SummaryColumn>& columns) {
  std::string out = "scenario,";
  for (std::size_t i = 0; i < std::size(kSummaryRows); ++i) {
    out += std::string("\"") + kSummaryRows[i] + "\"" + (i + 1 < std::size(kSummaryRows) ? "," : "\n");
  }
  auto pct = [](double v) { return format_number(std::round(v * 1000.0) / 10.0); };
  for (const SummaryColumn& c : columns) {
    const IndicatorSet& s = c.indicators;
    out += "\"" + c.label + "\",";
    out += format_number(std::round(s.capacity_kw / 1e6 * 100.0) / 100.0) + " (" +
           format_number(std::round(s.coverage * 100.0)) + "%),";
    out += (s.self_consumption ? pct(*s.self_consumption) : std::string()) + ',';
    out += pct(s.self_sufficiency) + ',' + pct(s.energy_sufficiency) + ',';
    out += format_number(std::round(s.cost_saving_pct_incl_fuel * 10.0) / 10.0) + ',';
    out += format_number(std::round(s.co2_reduction_pct * 10.0) / 10.0) + '\n';
  }
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& m, std::string_view corner, const std::vector<double>& row_labels,
                       const std::vector<double>& col_labels) {
  if (static_cast<Eigen::Index>(row_labels.size()) != m.rows() ||
      static_cast<Eigen::Index>(col_labels.size()) != m.cols()) {
    throw ValidationError("matrix labels do not match its shape");
  }
  std::string out(corner);
  for (double c : col_labels) out += ',' + format_number(c);
  out += '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += format_number(row_labels[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < m.cols(); ++c) out += ',' + format_number(m(r, c));
    out += '\n';
  }
  return out;
}

std::string coherence_csv(const CoherenceMap& map, CoherenceGrid grid) {
  if (grid == CoherenceGrid::Mask && map.mask.size() == 0) throw ValidationError("significance mask not computed");
  std::string out = "period_h";
  for (Eigen::Index t = 0; t < map.times(); ++t) out += ',' + std::to_string(t);
  out += '\n';
  for (Eigen::Index j = 0; j < map.periods.size(); ++j) {
    out += format_number(map.periods[j]);
    for (Eigen::Index t = 0; t < map.times(); ++t) {
      switch (grid) {
        case CoherenceGrid::Coherence: out += ',' + format_number(map.coherence(j, t)); break;
        case CoherenceGrid::Phase: out += ',' + format_number(map.phase(j, t)); break;
        case CoherenceGrid::Mask: out += map.mask(j, t) ? ",1" : ",0"; break;
      }
    }
    out += '\n';
  }
  return out;
}

std::string coi_csv(const CoherenceMap& map) {
  std::string out = "hour,coi_period_h\n";
  for (Eigen::Index t = 0; t < map.coi.size(); ++t) out += std::to_string(t) + ',' + format_number(map.coi[t]) + '\n';
  return out;
}

RunManifest::RunManifest(std::string command, std::string config_snapshot)
    : command_(std::move(command)), config_(std::move(config_snapshot)) {}

void RunManifest::add_input(const fs::path& path) { inputs_.emplace_back(path.string(), sha256_file(path)); }

void RunManifest::add_parameter(const std::string& key, const std::string& value) {
  parameters_.emplace_back(key, value);
}

void RunManifest::emit(const fs::path& dir, const std::string& name, std::string_view content) {
  write_file_atomic(dir / name, content);
  output_names_.push_back(name);
  output_digests_.push_back(sha256_hex(content));
}

std::string RunManifest::json(const std::string& timestamp) const {
  ordered_json j;
  j["tool"] = "solarev";
  j["version"] = SOLAREV_VERSION;
  j["command"] = command_;
  j["created_utc"] = timestamp;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : parameters_) params[k] = v;
  j["parameters"] = params;
  j["config"] = config_;
  ordered_json inputs = ordered_json::array();
  for (const auto& [path, digest] : inputs_) inputs.push_back({{"path", path}, {"sha256", digest}});
  j["inputs"] = inputs;
  ordered_json outputs = ordered_json::array();
  for (std::size_t i = 0; i < output_names_.size(); ++i) {
    outputs.push_back({{"file", output_names_[i]}, {"sha256", output_digests_[i]}});
  }
  outputs.push_back({{"file", "manifest.json"}, {"sha256", nullptr}});
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

void RunManifest::write(const fs::path& dir) const {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  write_file_atomic(dir / "manifest.json", json(buf));
}

}  // namespace solarev
