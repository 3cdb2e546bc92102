#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "weakhyp/output.hpp"
#include "weakhyp/scenario.hpp"

namespace weakhyp {

// Stage classes map to exit codes: 1 config, 2 reduction, 3 eigen, 4 energy,
// 5 solve, 6 fit.
class StageFailure : public std::runtime_error {
 public:
  StageFailure(int exit_code, const std::string& msg)
      : std::runtime_error(msg), code_(exit_code) {}
  int exit_code() const { return code_; }

 private:
  int code_;
};

struct PipelineOptions {
  std::string out_dir = "out";
  OutputFormat format = OutputFormat::csv;
  double tol = 1e-8;
  int jobs = 1;
  std::vector<std::string> stages;  // subset of {reduce, eigen, energy, solve, fit}; empty = all
  std::optional<std::uint64_t> seed;
  std::optional<double> s;        // Gevrey order for solve/plan (default: scenario's first)
  std::optional<double> s0;       // data order override
  std::optional<double> delta0;   // data radius override
  bool write_trajectories = false;
};

// Runs the requested stages in proof order, writes columnar outputs and the
// manifest under out_dir, and returns the manifest.  Throws StageFailure.
RunManifest run_pipeline(const Scenario& scenario, const PipelineOptions& opt);

// Rows (alpha, m, s_star, s_prior, improvement) with s_star = 1 + min{alpha,
// 1/(m-1)} and s_prior = 1 + alpha/m; 1/(m-1) is +inf at m = 1.
Table threshold_table(const std::vector<double>& alphas, const std::vector<int>& ms);

extern const char* kArtifactVersion;

}  // namespace weakhyp
