#pragma once

#include <vector>

#include <Eigen/Dense>

#include "weakhyp/eigenfield.hpp"

namespace weakhyp {

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
// the Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Canonical bump c * exp(-1 / (1 - x^2)) on (-1, 1), normalized to unit mass
// against a fixed symmetric composite Gauss-Legendre rule.  The same rule is
// used for every convolution, so constants are reproduced exactly.
class MollifierSpec {
 public:
  static MollifierSpec canonical(int points_per_cell = 16, int cells = 24);

  // Quadrature nodes u_q in (-1, 1) and premultiplied weights w_q phi(u_q),
  // w_q phi'(u_q).  sum(wphi) == 1 by normalization.
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& wphi() const { return wphi_; }
  const std::vector<double>& wdphi() const { return wdphi_; }

  double mass() const;                   // sum of wphi
  double mass_independent(int points_per_cell, int cells) const;  // finer-rule check
  double phi(double x) const;            // normalized bump value

 private:
  MollifierSpec() = default;
  double norm_c_ = 1.0;
  std::vector<double> nodes_, wphi_, wdphi_;
};

// lambda_{j,eps}(t, xi) = (lambda_j(., xi) * phi_eps)(t) + j eps^alpha <xi>
// on the same grid, with constant extension of lambda outside [0, T].
// Time derivatives come from convolution with phi'_eps.
struct RegularizedEigenField {
  std::vector<double> t;
  double eps = 0.0;
  double alpha = 1.0;
  double bracket = 1.0;   // <xi>
  double xi_norm = 0.0;
  Eigen::MatrixXd lam_eps;   // nt x m
  Eigen::MatrixXd dlam_eps;  // nt x m

  int nt() const { return static_cast<int>(t.size()); }
  int m() const { return static_cast<int>(lam_eps.cols()); }
};

// Throws std::invalid_argument when eps < 4 grid spacings (under-resolved).
RegularizedEigenField mollify(const EigenField& field, const MollifierSpec& mol, double eps,
                              double alpha);

// Empirical constants of the regularized-eigenvalue bounds, measured on
// t in [0, t_max]:
//   c_i  = sup |dt lambda_{j,eps}| / (eps^{alpha-1} <xi>)
//   c_ii = sup |lambda_{j,eps} - lambda_j| / (eps^alpha <xi>)
//   separation_ok: lambda_{j,eps} - lambda_{i,eps} >= eps^alpha <xi>, j > i
struct RegularizationConstants {
  double c_i = 0.0;
  double c_ii = 0.0;
  bool separation_ok = true;
  double worst_separation_margin = 0.0;  // min (gap - eps^alpha <xi>), >= 0 when ok
};

RegularizationConstants verify_regularized_bounds(const RegularizedEigenField& reg,
                                                  const EigenField& field, double t_max);

}  // namespace weakhyp
