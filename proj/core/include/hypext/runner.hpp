#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hypext/limits.hpp"

// Experiment orchestration: JSON configs, deterministic execution of the
// verification suites and scans, CSV reports and JSON summaries.

namespace hypext {

// Config validation failure; `path` points at the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct FamilySpec {
  std::string name = "bump";
  BumpSpec bump;
  bool operator==(const FamilySpec&) const = default;
};

struct RangeSpec {
  double min = 0, max = 0, step = 1;
  std::vector<double> values() const;
  bool operator==(const RangeSpec&) const = default;
};

struct ExperimentConfig {
  std::string command = "converge";
  FamilySpec family;
  int n = 3;
  int k = 2;
  double theta = std::numbers::pi / 2;

  RangeSpec b_grid{-4.0, 2.0, 0.5};
  RangeSpec lambda_grid{6.0, 24.0, 2.0};
  GridSpec sphere_grid;
  double mask_delta = 0.05;

  double eps_c2 = 1e-3;
  double eps_c0 = 1e-5;
  double saturation_floor = 1e-5;

  // cut / extend-cut
  double cut_lambda = 10.0;
  double cut_radius = 8.0;
  bool cut_normalized = true;
  double extend_s = 12.0;

  // beta1
  double beta1_B = 0.0;
  double beta1_c = 0.0;
  double beta1_c_prime = -1.0;

  // boundary
  double boundary_b = 0.0;
  double boundary_lambda_prime = 24.0;
  double boundary_margin = 0.5;
  std::vector<double> boundary_deltas{0.2, 0.1, 0.05, 0.025};

  std::string out_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

// JSON round trip: parse(serialize(config)) == config. Parsing validates and
// throws ConfigError with the field path on violations.
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Executes a validated config: writes <command>.csv and
// <command>_summary.json under out_dir. Returns 0 on verdict success and 2
// on verdict failure. Outputs are byte-identical across runs of the same
// config. Throws ConfigError for violations detectable only at run time.
int run(const ExperimentConfig& config);

// 17-significant-digit float formatting used in all reports.
std::string format_double(double v);

}  // namespace hypext
