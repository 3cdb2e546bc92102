#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "weakhyp/mollifier.hpp"
#include "weakhyp/reduce.hpp"

namespace weakhyp {

// One block of the quasi-Vandermonde symmetrizer H_eps: entry (k+1, j) is
// lambda_{j,eps}^k <xi>^{-k}.  Determinant in closed product form, inverse
// from Lagrange interpolation weights on the scaled nodes mu_j.
struct SymmetrizerBlock {
  Eigen::VectorXd mu;    // lambda_{j,eps} / <xi>, strictly increasing
  Eigen::VectorXd dmu;   // d/dt of mu
  Eigen::MatrixXd H;
  Eigen::MatrixXd Hinv;
  double det = 0.0;

  int m() const { return static_cast<int>(mu.size()); }
};

// Builds the block at grid index it.  Throws std::domain_error on node
// collision below 1e-14 relative (cannot occur while separation holds).
SymmetrizerBlock build_block(const RegularizedEigenField& reg, int it);

// Closed-form helpers shared with tests.
double vandermonde_det(const Eigen::VectorXd& mu);
Eigen::MatrixXd lagrange_inverse(const Eigen::VectorXd& mu);

// |dt det H / det H| = |sum_{i<j} (dl_j - dl_i) / (l_j - l_i)|.
double detH_log_derivative(const RegularizedEigenField& reg, int it);

double spectral_norm(const Eigen::MatrixXcd& M);

// The four energy quantities at one grid point:
//   q1 = |dt det H / det H|
//   q2 = ||H^{-1} dt H||
//   q3 = ||H^{-1} A H - (H^{-1} A H)^*||      (single block)
//   q4 = ||He^{-1} L He - (He^{-1} L He)^*||  (full m^2 x m^2)
struct EnergyQuantities {
  double q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0;
};

EnergyQuantities energy_quantities(const RegularizedEigenField& reg, const ReducedSystem& reduced,
                                   int it, const Eigen::VectorXd& xi);

// Log-log fit of one quantity against eps.
struct ScalingFit {
  std::string name;
  double target = 0.0;      // the bound's exponent
  double slope = 0.0;
  double intercept = 0.0;   // empirical constant c, q ~= c * eps^slope
  bool degenerate = false;  // all samples zero: identically better than bound
  bool pass = false;        // slope >= target - margin (or degenerate)
};

struct ScalingReport {
  std::vector<double> eps;
  ScalingFit q1, q2, q3, q4;  // q3 fitted on q3 / <xi>
};

// sup-over-t quantities per eps; pass margin fixed at 0.15 one-sided.
ScalingReport fit_scaling(const std::vector<double>& eps_grid,
                          const std::vector<EnergyQuantities>& sup_quantities, double alpha,
                          int m, double bracket);

struct WeightPlan {
  double gamma = 0.0;
  double s = 0.0;
  double rho0 = 0.0;
  double kappa = 0.0;
  double Xi0 = 0.0;       // cutoff radius |xi|
  double C = 0.0;         // combined empirical constant C1 + C2 + C3
  bool feasible = false;  // kappa * T < rho0, i.e. rho stays positive on [0, T]
};

class InadmissibleOrder : public std::runtime_error {
 public:
  explicit InadmissibleOrder(const std::string& msg) : std::runtime_error(msg) {}
};
class WeightInfeasible : public std::runtime_error {
 public:
  explicit WeightInfeasible(const std::string& msg) : std::runtime_error(msg) {}
};

double gamma_exponent(double alpha, int m);      // min{1/(1+alpha), 1/(alpha m)}
double gevrey_threshold(double alpha, int m);    // 1 + min{alpha, 1/(m-1)}, m=1 -> 1+alpha

// With eps(xi) = <xi>^{-gamma}, picks kappa = (1/2) max over the grid of
// C <xi>^{1 - gamma alpha - 1/s} and Xi0 = the radius attaining the max (the
// left end whenever the exponent is negative, i.e. for admissible s), so
// 2 kappa <xi>^{1/s} >= C <xi>^{1 - gamma alpha} at every grid radius >= Xi0.
// Throws InadmissibleOrder when 1/s <= 1 - gamma alpha; when require_feasible
// is set, throws WeightInfeasible if kappa T >= rho0 (rho would hit zero
// before T), otherwise the condition is reported in the feasible flag.
WeightPlan plan_weight(double s, const ScalingReport& scaling, const std::vector<double>& radii,
                       double alpha, int m, double rho0, double T,
                       bool require_feasible = true);

}  // namespace weakhyp
