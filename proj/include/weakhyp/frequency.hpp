#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "weakhyp/energy.hpp"
#include "weakhyp/reduce.hpp"

namespace weakhyp {

// Log-spaced radii 2^0 .. 2^K with a fixed unit direction set
// ({+1, -1} for n = 1, a deterministic low-discrepancy set for n >= 2).
struct FrequencyGrid {
  std::vector<double> radii;
  std::vector<Eigen::VectorXd> directions;

  static FrequencyGrid dyadic(int n, int K, int n_directions = 2);
  Eigen::VectorXd xi(int radius_index, int dir_index) const {
    return radii[static_cast<std::size_t>(radius_index)] *
           directions[static_cast<std::size_t>(dir_index)];
  }
};

class StepSizeUnderflow : public std::runtime_error {
 public:
  StepSizeUnderflow(double t, double h)
      : std::runtime_error("integrator step-size underflow at t = " + std::to_string(t) +
                           " (h = " + std::to_string(h) + "); stiffness suspected"),
        t_(t) {}
  double where() const { return t_; }

 private:
  double t_;
};

struct IntegratorStats {
  long steps = 0;
  long rejected = 0;
  double max_error_estimate = 0.0;  // largest accepted scaled local error
};

struct IntegratorOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;  // 0 = no cap
};

// Dormand-Prince 5(4) for dy/dt = f(t, y), sampling the solution at the
// requested output times (steps are clipped to land on them exactly).
std::vector<Eigen::VectorXcd> integrate_ode(
    const std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>& f,
    const Eigen::VectorXcd& y0, const std::vector<double>& t_out, const IntegratorOptions& opt,
    IntegratorStats* stats = nullptr);

// Fourier-side Gevrey data |g0(xi)| = exp(-delta0 <xi>^{1/s0}); amplitudes
// are carried in log form so large delta0 never underflows.
struct GevreyData {
  double s0 = 1.5;
  double delta0 = 1.0;
  std::uint64_t seed = 0;
  bool random_phases = false;

  double log_amplitude(double bracket) const {
    return -delta0 * std::pow(bracket, 1.0 / s0);
  }
  // Unit-magnitude m-vector of phases for one frequency (deterministic in
  // (seed, radius index, dir index, component)).
  Eigen::VectorXcd phases(int m, int radius_index, int dir_index) const;
};

// Per-frequency solution histories.  All vectors are unit-normalized at t=0
// up to the common factor exp(log_amp0), which is tracked separately.
struct ModeTrajectory {
  std::vector<double> t;
  double log_amp0 = 0.0;                 // log |g0(xi)|
  std::vector<Eigen::VectorXcd> u_hat;   // m components
  std::vector<Eigen::VectorXcd> v;       // m^2 components
  IntegratorStats stats_u, stats_v;
};

// Integrates d/dt u = i (A(t,xi) + B(t)) u from g0hat on the sample grid.
std::vector<Eigen::VectorXcd> solve_original(const SystemSpec& spec, const Eigen::VectorXd& xi,
                                             const Eigen::VectorXcd& g0hat,
                                             const std::vector<double>& t_out,
                                             const IntegratorOptions& opt,
                                             IntegratorStats* stats = nullptr);

// U(0) from the recursion D_t^k u = sum binom (D_t^j (A+B)) (D_t^{k-1-j} u);
// component (i-1)m + j is <xi>^{m-j} (D_t^{j-1} u)_i(0).  When kink_nudge > 0
// and a coefficient derivative is undefined exactly at t = 0, the derivatives
// are taken at t = kink_nudge instead (right limit); default propagates the
// tagged error.
Eigen::VectorXcd lift_initial(const SystemSpec& spec, const Eigen::VectorXd& xi,
                              const Eigen::VectorXcd& g0hat, double kink_nudge = 0.0);

// Integrates d/dt V = i (script A + script L) V from U0.
std::vector<Eigen::VectorXcd> solve_reduced(const ReducedSystem& reduced,
                                            const Eigen::VectorXd& xi,
                                            const Eigen::VectorXcd& U0,
                                            const std::vector<double>& t_out,
                                            const IntegratorOptions& opt,
                                            IntegratorStats* stats = nullptr);

// W = e^{rho(t) <xi>^{1/s}} det H_eps H_eps^{-1} V, carried as a unit-scale
// vector plus a log magnitude so the exponential weight never overflows.
struct ScaledVector {
  Eigen::VectorXcd v;
  double log_scale = 0.0;  // true vector = exp(log_scale) * v

  double log_norm() const { return log_scale + std::log(v.norm()); }
};

ScaledVector w_transform(const Eigen::VectorXcd& V, const RegularizedEigenField& reg,
                         const WeightPlan& plan, int it);
// Inverse map V = e^{-rho(t) <xi>^{1/s}} (det H)^{-1} H W.
ScaledVector w_inverse(const ScaledVector& W, const RegularizedEigenField& reg,
                       const WeightPlan& plan, int it);

struct EnergyCheck {
  double max_ratio = 0.0;      // max over t of |W(t)| / |W(0)|
  int argmax_index = 0;
  bool pass = false;           // max_ratio <= 1 + tol
};

EnergyCheck check_energy(const std::vector<double>& log_norm_W, double tol = 1e-8);

struct DecayFit {
  double delta = 0.0;
  double intercept = 0.0;
  double residual = 0.0;       // ||r||_2 / ||y||_2
  double s = 0.0;
  double Xi0 = 0.0;
  int n_points = 0;
  bool fully_decayed = false;  // every sample under the floor
  double log_poly_coeff = 0.0; // coefficient of log<xi> when the correction
                               // term is included
};

// Regresses -log|V(T, xi)| on <xi>^{1/s} over radii >= Xi0.  When
// with_log_term is set, a log<xi> column absorbs the polynomial loss factor.
DecayFit fit_decay(const std::vector<double>& brackets, const std::vector<double>& radii,
                   const std::vector<double>& log_absV_final, double s, double Xi0,
                   bool with_log_term = false);

}  // namespace weakhyp
