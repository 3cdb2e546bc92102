#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "weakhyp/system.hpp"

namespace weakhyp {

// A root of delta(t, ., xi) came out with imaginary part above the
// hyperbolicity tolerance.
class HyperbolicityError : public std::runtime_error {
 public:
  HyperbolicityError(double t, double xi_norm, double im)
      : std::runtime_error("hyperbolicity violated at t = " + std::to_string(t) +
                           ", |xi| = " + std::to_string(xi_norm) +
                           " (|Im root| = " + std::to_string(im) + ")"),
        t_(t),
        xi_norm_(xi_norm) {}
  double t() const { return t_; }
  double xi_norm() const { return xi_norm_; }

 private:
  double t_, xi_norm_;
};

// Ordered real eigenvalues lambda_1 <= ... <= lambda_m of A(t, xi) on a
// uniform t-grid, for one frequency xi.
struct EigenField {
  std::vector<double> t;     // uniform grid on [0, T]
  Eigen::VectorXd xi;
  double xi_norm = 0.0;
  double bracket = 1.0;      // <xi>
  Eigen::MatrixXd lambda;    // t.size() x m, rows sorted ascending
  double tol = 1e-8;         // hyperbolicity tolerance factor

  int nt() const { return static_cast<int>(t.size()); }
  int m() const { return static_cast<int>(lambda.cols()); }
  double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

std::vector<double> uniform_grid(double T, int nt);

// Roots of delta(t, ., xi) by companion-matrix eigensolve, sorted ascending.
// Throws HyperbolicityError if |Im root| > tol * (1 + |xi|).
EigenField compute_eigenvalues(const SystemSpec& spec, const std::vector<double>& tgrid,
                               const Eigen::VectorXd& xi, double tol = 1e-8);

// Real roots of tau^m + b_1 tau^{m-1} + ... + b_m; helper shared with tests.
Eigen::VectorXcd poly_roots(const std::vector<double>& b);

// Grid-pair Holder seminorm sup |l(t)-l(s)| / |t-s|^alpha for eigenvalue j.
double estimate_holder(const EigenField& field, double alpha, int j);

struct UniformityReport {
  double c = 0.0;        // best constant over the sampled grid
  bool pass = true;      // false iff some ratio x/0 with x > 0 occurred
  // argmax / failure witness
  int i = -1, j = -1, k = -1, t_index = -1;
  double t = 0.0, xi_norm = 0.0;
};

// Eq-style sup of |lambda_i - lambda_j| / |lambda_k - lambda_{k-1}| over the
// grid; 0/0 ratios are skipped, x/0 with x > 0 is a failure with witness.
UniformityReport check_uniform_property(const EigenField& field);
UniformityReport merge(const UniformityReport& a, const UniformityReport& b);

}  // namespace weakhyp
