// solarev: command-line front end for the city-scale PV + EV engine.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "solarev/coherence.hpp"
#include "solarev/core.hpp"
#include "solarev/dispatch.hpp"
#include "solarev/ingest.hpp"
#include "solarev/pv.hpp"
#include "solarev/report.hpp"
#include "solarev/sweep.hpp"
#include "solarev/synthetic.hpp"

namespace fs = std::filesystem;
using namespace solarev;

namespace {

struct ScenarioArgs {
  std::string config;
  std::string region = "Paris";
  std::string region_file;
  std::string weather;
  std::string demand;
  double demand_factor = 1.0;
  std::string out;
  int threads = 0;
  std::string grid = "0:0.71:0.01";
  bool fit_variants = false;
};

int thread_count(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
  return dir;
}

ScenarioConfig load_config(const std::string& path) {
  return path.empty() ? build_scenario("") : build_scenario(read_file(path));
}

RegionProfile load_region(const std::string& name, const std::string& file) {
  return file.empty() ? region_preset(name) : parse_region(read_file(file));
}

std::string snapshot(const ScenarioConfig& c, const RegionProfile& r) {
  return serialize_scenario(c) + "\n[region]\n" + serialize_region(r);
}

struct Loaded {
  ScenarioConfig config;
  RegionProfile region;
  WeatherYear weather;
  HourlySeries demand;
};

Loaded load_inputs(const ScenarioArgs& a, RunManifest& m) {
  Loaded l;
  l.config = load_config(a.config);
  l.region = load_region(a.region, a.region_file);
  l.weather = load_weather(a.weather, site_of(l.region));
  const HourlySeries d = load_demand(a.demand);
  l.demand = a.demand_factor == 1.0 ? d : derive_scaled_demand(d, a.demand_factor);

  m.set_config(snapshot(l.config, l.region));
  if (!a.config.empty()) m.add_input(a.config);
  if (!a.region_file.empty()) m.add_input(a.region_file);
  m.add_input(a.weather);
  m.add_input(a.demand);
  m.add_parameter("region", l.region.name);
  m.add_parameter("demand_factor", format_number(a.demand_factor));
  return l;
}

std::string scenario_label(const ScenarioConfig& c, const RegionProfile& r) {
  return r.name + " " + std::string(period_name(c.period)) + " " +
         (c.system == System::PVEV ? "PV+EV" : "PV only") + (c.fit_enabled ? " with FIT" : " without FIT");
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + ": unparseable number '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
  return out;
}

int cmd_run(const ScenarioArgs& a) {
  RunManifest m("run");
  const Loaded l = load_inputs(a, m);
  const fs::path out = prepare_out(a.out);
  const ScenarioResult r = run_scenario_detailed(l.config, prepare_inputs(l.config, l.region, l.weather, l.demand));
  const EnergyFlows& flows = r.horizon.first_year;
  m.emit(out, "indicators.json", indicators_json(r.indicators, l.config, l.region));
  m.emit(out, "flows.csv", flows_csv(flows));
  m.emit(out, "daily_profile.csv", daily_profile_csv(mean_daily_profile(flows), flows));
  m.write(out);
  return 0;
}

int cmd_sweep(const ScenarioArgs& a) {
  RunManifest m("sweep");
  const Loaded l = load_inputs(a, m);
  const std::vector<double> grid = parse_grid(a.grid);
  const int threads = thread_count(a.threads);
  m.add_parameter("grid", a.grid);
  const fs::path out = prepare_out(a.out);

  const ScenarioInputs in = prepare_inputs(l.config, l.region, l.weather, l.demand);
  const SweepResult sweep = sweep_coverage(l.config, in, grid, threads);
  std::vector<SummaryColumn> summary{{scenario_label(l.config, l.region), sweep.best()}};
  if (a.fit_variants) {
    ScenarioConfig other = l.config;
    other.fit_enabled = !other.fit_enabled;
    const SweepResult alt = sweep_coverage(other, in, grid, threads);
    summary.push_back({scenario_label(other, l.region), alt.best()});
    if (!l.config.fit_enabled) std::swap(summary[0], summary[1]);
  }
  m.emit(out, "sweep.csv", sweep_csv(sweep, l.config));
  m.emit(out, "optimum.json", optimum_json(sweep, l.config, l.region));
  m.emit(out, "summary.csv", summary_csv(summary));
  m.write(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solarev: rooftop PV + EV city energy and economics engine"};
  app.set_version_flag("--version", std::string(SOLAREV_VERSION));
  app.require_subcommand(1);

  ScenarioArgs run_args;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write indicators, flows and the daily profile");
  ScenarioArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Evaluate a roof-coverage grid and report the NPV optimum");
  for (auto [cmd, a] : {std::pair{run, &run_args}, std::pair{sweep, &sweep_args}}) {
    cmd->add_option("--config", a->config, "Scenario TOML (defaults when omitted)");
    cmd->add_option("--region", a->region, "Preset: Paris, IleDeFrance or Kyoto");
    cmd->add_option("--region-file", a->region_file, "Region TOML, overrides --region");
    cmd->add_option("--weather", a->weather, "Hourly weather CSV")->required();
    cmd->add_option("--demand", a->demand, "Hourly demand CSV")->required();
    cmd->add_option("--demand-factor", a->demand_factor, "Multiply the demand file by this factor");
    cmd->add_option("--out", a->out, "Output directory")->required();
    cmd->add_option("--threads", a->threads, "Worker threads, 0 = all cores (results do not depend on it)");
  }
  sweep->add_option("--grid", sweep_args.grid, "Coverage grid START:STOP:STEP");
  sweep->add_flag("--fit-variants", sweep_args.fit_variants, "Also sweep the opposite FIT setting for summary.csv");

  std::string scan_weather, scan_region = "Paris", scan_config, scan_out;
  std::string scan_tilts = "0,10,20,30,40,50,60,70,80,90", scan_azimuths = "90,135,180,225,270";
  auto* scan = app.add_subcommand("scan", "Annual specific yield over a tilt x azimuth grid");
  scan->add_option("--weather", scan_weather, "Hourly weather CSV")->required();
  scan->add_option("--region", scan_region, "Preset giving the site");
  scan->add_option("--config", scan_config, "Scenario TOML for the array parameters");
  scan->add_option("--tilts", scan_tilts, "Comma-separated tilts, degrees");
  scan->add_option("--azimuths", scan_azimuths, "Comma-separated azimuths, degrees clockwise from north");
  scan->add_option("--out", scan_out, "Output directory")->required();

  std::string coh_x, coh_y, coh_xcol = "demand", coh_ycol = "temp", coh_out;
  SignificanceOptions sig;
  CoherenceOptions copt;
  bool coh_no_sig = false;
  auto* coh = app.add_subcommand("coherence", "Wavelet coherence between two hourly series");
  coh->add_option("--x", coh_x, "CSV holding the first series")->required();
  coh->add_option("--y", coh_y, "CSV holding the second series")->required();
  coh->add_option("--x-column", coh_xcol, "Column of --x");
  coh->add_option("--y-column", coh_ycol, "Column of --y");
  coh->add_option("--out", coh_out, "Output directory")->required();
  coh->add_option("--seed", sig.seed, "Surrogate seed");
  coh->add_option("--surrogates", sig.n_surrogates, "AR(1) surrogate pairs (>= 100)");
  coh->add_option("--alpha", sig.alpha, "Significance level");
  coh->add_option("--threads", sig.threads, "Worker threads, 0 = all cores (results do not depend on it)");
  coh->add_option("--min-period", copt.min_period, "Shortest period, hours");
  coh->add_option("--max-period", copt.max_period, "Longest period, hours");
  coh->add_flag("--detrend", copt.detrend, "Remove a linear trend first");
  coh->add_flag("--no-significance", coh_no_sig, "Skip the surrogate test (mask.csv is not written)");

  auto* preset = app.add_subcommand("preset", "Region presets");
  preset->require_subcommand(1);
  std::string preset_name, preset_out;
  auto* dump = preset->add_subcommand("dump", "Print a preset as TOML");
  dump->add_option("name", preset_name, "Paris, IleDeFrance or Kyoto")->required();
  dump->add_option("--out", preset_out, "Also write <name>.toml and a manifest here");

  std::string cal_weather, cal_region = "Paris", cal_config;
  double cal_target = 0.111;
  auto* cal = app.add_subcommand("calibrate", "Fit system_loss to a target capacity factor");
  cal->add_option("--weather", cal_weather, "Hourly weather CSV")->required();
  cal->add_option("--region", cal_region, "Preset giving the site");
  cal->add_option("--config", cal_config, "Scenario TOML for the array parameters");
  cal->add_option("--target-cf", cal_target, "Target annual capacity factor");

  std::string synth_out;
  std::uint64_t synth_seed = 2019;
  auto* synth = app.add_subcommand("synth", "Write the synthetic weather and demand years");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*sweep) return cmd_sweep(sweep_args);

    if (*scan) {
      RunManifest m("scan");
      const ScenarioConfig c = load_config(scan_config);
      const RegionProfile r = region_preset(scan_region);
      const WeatherYear w = scale_irradiance(load_weather(scan_weather, site_of(r)), c.irradiance_scale);
      const std::vector<double> tilts = parse_list(scan_tilts, "--tilts");
      const std::vector<double> az = parse_list(scan_azimuths, "--azimuths");
      const Eigen::MatrixXd yield = tilt_azimuth_scan(w, tilts, az, pv_array_from(c, 1.0));
      m.set_config(snapshot(c, r));
      if (!scan_config.empty()) m.add_input(scan_config);
      m.add_input(scan_weather);
      m.add_parameter("tilts", scan_tilts);
      m.add_parameter("azimuths", scan_azimuths);
      const fs::path out = prepare_out(scan_out);
      m.emit(out, "scan.csv", matrix_csv(yield, "tilt\\azimuth", tilts, az));
      m.write(out);
      return 0;
    }

    if (*coh) {
      RunManifest m("coherence");
      const HourlySeries x = load_column(coh_x, coh_xcol);
      const HourlySeries y = load_column(coh_y, coh_ycol);
      sig.threads = thread_count(sig.threads);
      CoherenceMap map = wavelet_coherence(x, y, copt);
      if (!coh_no_sig) significance_mask(map, x.values, y.values, copt, sig);
      m.add_input(coh_x);
      m.add_input(coh_y);
      m.add_parameter("x_column", coh_xcol);
      m.add_parameter("y_column", coh_ycol);
      m.add_parameter("seed", std::to_string(sig.seed));
      m.add_parameter("surrogates", std::to_string(sig.n_surrogates));
      m.add_parameter("alpha", format_number(sig.alpha));
      m.add_parameter("min_period", format_number(copt.min_period));
      m.add_parameter("max_period", format_number(copt.max_period));
      m.add_parameter("detrend", copt.detrend ? "true" : "false");
      const fs::path out = prepare_out(coh_out);
      m.emit(out, "coherence.csv", coherence_csv(map, CoherenceGrid::Coherence));
      m.emit(out, "phase.csv", coherence_csv(map, CoherenceGrid::Phase));
      if (!coh_no_sig) m.emit(out, "mask.csv", coherence_csv(map, CoherenceGrid::Mask));
      m.emit(out, "coi.csv", coi_csv(map));
      m.write(out);
      return 0;
    }

    if (*dump) {
      const RegionProfile r = region_preset(preset_name);
      const std::string text = serialize_region(r);
      std::cout << text;
      if (!preset_out.empty()) {
        RunManifest m("preset dump", text);
        m.add_parameter("name", r.name);
        const fs::path out = prepare_out(preset_out);
        m.emit(out, r.name + ".toml", text);
        m.write(out);
      }
      return 0;
    }

    if (*cal) {
      const ScenarioConfig c = load_config(cal_config);
      const RegionProfile r = region_preset(cal_region);
      const WeatherYear w = scale_irradiance(load_weather(cal_weather, site_of(r)), c.irradiance_scale);
      PvArrayConfig array = pv_array_from(c, 1.0);
      std::cout << "capacity_factor_default_loss = "
                << format_number(capacity_factor(generation_series(w, array), 1.0)) << std::endl;
      array.system_loss = calibrate_system_loss(w, array, cal_target);
      const double after = capacity_factor(generation_series(w, array), 1.0);
      std::cout << "system_loss = " << format_number(array.system_loss) << "\n"
                << "capacity_factor = " << format_number(after) << "\n";
      return 0;
    }

    if (*synth) {
      RunManifest m("synth");
      m.add_parameter("seed", std::to_string(synth_seed));
      const fs::path out = prepare_out(synth_out);
      const WeatherYear paris = synthetic_weather(paris_climate(), synth_seed);
      const RegionProfile idf = region_preset(RegionName::IleDeFrance);
      const HourlySeries idf_demand = synthetic_demand(paris, DemandStyle::Paris, idf.annual_demand, synth_seed + 1);
      const WeatherYear kyoto = synthetic_weather(kyoto_climate(), synth_seed + 2);
      const RegionProfile ky = region_preset(RegionName::Kyoto);
      const HourlySeries ky_demand = synthetic_demand(kyoto, DemandStyle::Kyoto, ky.annual_demand, synth_seed + 3);
      m.emit(out, "paris_2019_weather.csv", weather_csv(paris));
      m.emit(out, "idf_2019_demand.csv", demand_csv(idf_demand));
      m.emit(out, "kyoto_2018_weather.csv", weather_csv(kyoto));
      m.emit(out, "kyoto_2018_demand.csv", demand_csv(ky_demand));
      m.write(out);
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
