#pragma once

#include <vector>

#include <Eigen/Dense>

#include "weakhyp/system.hpp"
#include "weakhyp/taupoly.hpp"

namespace weakhyp {

// Coefficients of det(tau I - A) = tau^m + b_1 tau^{m-1} + ... + b_m together
// with the adjugate adj(tau I - A), both from one Faddeev-LeVerrier pass.
struct CharPolyResult {
  std::vector<double> b;   // b[h-1] = b_h, h = 1..m
  TauPolyMatrix adjugate;  // degree <= m-1, L(tau) * (tau I - A) = delta(tau) I
};

CharPolyResult faddeev_leverrier(const Eigen::MatrixXd& A);

// Coefficients only: (b_1, ..., b_m).
std::vector<double> char_poly(const Eigen::MatrixXd& A);

// b_{m-h}(t, xi) of delta(t, tau, xi) = det(tau I - A(t, xi)).
std::vector<double> char_poly_at(const SystemSpec& spec, double t, const Eigen::VectorXd& xi);

// Cofactor matrix L(t, tau, xi) of (tau I - A(t, xi))^T, i.e. adj(tau I - A).
TauPolyMatrix adjugate_symbol(const SystemSpec& spec, double t, const Eigen::VectorXd& xi);

}  // namespace weakhyp
