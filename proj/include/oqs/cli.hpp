#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace oqs::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kWorkersEnv = "OQS_WORKERS";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepAxis {
  std::string parameter;
  std::vector<double> grid;
};

struct RunConfig {
  std::string scenario;
  std::map<std::string, double> overrides;
  std::vector<SweepAxis> axes;  // first axis varies slowest
  std::optional<std::vector<std::string>> observables;  // unset: every observable of the scenario
  std::uint64_t seed = 0;
  bool strict = false;
  std::string plot_x;  // plotdata abscissa; empty: first axis
};

// Schema:
// {"scenario": id, "params": {name: value}, "sweep": [{"parameter": name, "values": [..]}
//  | {"parameter": name, "linspace": [a, b, n]} | {"parameter": name, "logspace": [a, b, n]}],
//  "observables": [names], "seed": u64, "strict": bool, "plot": {"x": name}}
// Unknown keys, parameters and observables throw ConfigError naming the offender.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

struct ResultTable {
  std::string scenario;
  std::vector<std::string> parameters;   // swept parameters
  std::vector<std::string> observables;
  std::vector<std::vector<double>> rows;  // parameters then observables
  std::vector<std::string> errors;        // one per row, empty when the row is clean
  std::string config_hash;
  std::string version = kVersion;
  double wall_time = 0.0;
  std::string plot_x;

  bool has_errors() const;
};

std::string config_hash(const RunConfig& config);
ResultTable run(const RunConfig& config, int workers);

std::string to_csv(const ResultTable& table);
nlohmann::json to_json(const ResultTable& table);
// file name -> contents, one (x, y) file per observable and curve
std::map<std::string, std::string> to_plotdata(const ResultTable& table);
nlohmann::json catalog_json();

int main_entry(int argc, char** argv);

}  // namespace oqs::cli
