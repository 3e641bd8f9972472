#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "solarev/coherence.hpp"
#include "solarev/dispatch.hpp"
#include "solarev/sweep.hpp"

namespace solarev {

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a half-written file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double v);

/// "EUR2019" or "EUR2030": every monetary figure is in the period's euros.
std::string currency_label(const ScenarioConfig& config);

std::string flows_csv(const EnergyFlows& flows);

/// Annual-mean supply by hour of day plus the mean load.
std::string daily_profile_csv(const Eigen::Matrix<double, 24, 3>& profile, const EnergyFlows& flows);

std::string indicators_json(const IndicatorSet& s, const ScenarioConfig& config, const RegionProfile& profile);

std::string sweep_csv(const SweepResult& sweep, const ScenarioConfig& config);

std::string optimum_json(const SweepResult& sweep, const ScenarioConfig& config, const RegionProfile& profile);

/// One column of the decarbonisation summary table.
struct SummaryColumn {
  std::string label;
  IndicatorSet indicators;  // capacity shown with its roof coverage
};

inline constexpr const char* kSummaryRows[] = {
    "Optimal PV capacity (GW)", "Self-consumption (%)", "Self-sufficiency (%)",
    "Energy sufficiency (%)",   "Cost saving (%)",      "CO₂ emission reduction (%)"};

/// One row per scenario with the summary-table indicators as columns. The
/// cost saving includes fuel expenses.
std::string summary_csv(const std::vector<SummaryColumn>& columns);

/// Plain matrix with labelled rows and columns.
std::string matrix_csv(const Eigen::MatrixXd& m, std::string_view corner, const std::vector<double>& row_labels,
                       const std::vector<double>& col_labels);

enum class CoherenceGrid { Coherence, Phase, Mask };

/// Rows are periods (first column, hours), columns are time steps.
std::string coherence_csv(const CoherenceMap& map, CoherenceGrid grid);
std::string coi_csv(const CoherenceMap& map);

/// Record of one CLI invocation: what went in, what came out.
class RunManifest {
 public:
  explicit RunManifest(std::string command, std::string config_snapshot = {});

  void set_config(std::string snapshot) { config_ = std::move(snapshot); }
  void add_input(const std::filesystem::path& path);
  void add_parameter(const std::string& key, const std::string& value);

  /// Writes an artifact atomically into `dir` and lists it.
  void emit(const std::filesystem::path& dir, const std::string& name, std::string_view content);

  /// Writes manifest.json (with a UTC timestamp) into `dir`.
  void write(const std::filesystem::path& dir) const;

  std::string json(const std::string& timestamp) const;
  const std::vector<std::string>& outputs() const { return output_names_; }

 private:
  std::string command_;
  std::string config_;
  std::vector<std::pair<std::string, std::string>> parameters_;
  std::vector<std::pair<std::string, std::string>> inputs_;   // path, sha256
  std::vector<std::string> output_names_;
  std::vector<std::string> output_digests_;
};

}  // namespace solarev
