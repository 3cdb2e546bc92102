#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "weakhyp/system.hpp"

namespace weakhyp {

struct DataSpec {
  double s0 = 1.5;
  double delta0 = 1.0;
  std::uint64_t seed = 0;
  bool random_phases = false;
};

// A fully resolved run configuration: the system plus every grid and sweep
// parameter the pipeline stages need.
struct Scenario {
  std::string name;
  std::shared_ptr<const SystemSpec> system;
  int nt = 4097;            // uniform t-samples on [0, T]
  int K = 12;               // radii 2^0 .. 2^K
  int n_directions = 2;
  std::vector<double> eps_sweep;  // log-spaced, for energy scans
  double scan_radius = 256.0;     // |xi| for the eps sweep
  std::vector<double> s_values;   // Gevrey orders for solve/plan stages
  DataSpec data;

  void validate() const;  // throws std::invalid_argument with a field path
};

std::vector<std::string> builtin_scenario_names();

// Resolves a builtin by name; "holder_abs(0.5)" style names carry the Holder
// exponent.  Throws std::invalid_argument for unknown names.
Scenario make_builtin(const std::string& name);

// Builtin name first, then a config file (key-value or JSON).
Scenario load_scenario(const std::string& name_or_path);

// Canonical serialization used for config hashing and file round-trips.
std::string scenario_to_text(const Scenario& sc);
Scenario parse_scenario(const std::string& text);

}  // namespace weakhyp
