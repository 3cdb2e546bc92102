#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "weakhyp/expr.hpp"

namespace weakhyp {

// The (m, n, T, alpha) problem with matrix symbols A(t, xi) (degree 1 in xi)
// and B(t).  A_{ij}(t, xi) = sum_k a(i,j,k)(t) * xi_k.
//
// Immutable after construction; derivative trees up to order m-1 are
// precomputed so evaluators are pure functions of (t, xi).
class SystemSpec {
 public:
  SystemSpec(int m, int n, double T, double alpha, std::vector<ExprPtr> a_coeffs,
             std::vector<ExprPtr> b_coeffs);

  int m() const { return m_; }
  int n() const { return n_; }
  double T() const { return T_; }
  double alpha() const { return alpha_; }

  // Coefficient of xi_k in A_{ij}; zero-based indices.
  const ExprPtr& a(int i, int j, int k) const { return a_[idx3(i, j, k)]; }
  const ExprPtr& b(int i, int j) const { return b_[static_cast<std::size_t>(i) * m_ + j]; }

  // order-th t-derivative trees (order <= m-1).
  const ExprPtr& a_deriv(int i, int j, int k, int order) const {
    return da_[static_cast<std::size_t>(order)][idx3(i, j, k)];
  }
  const ExprPtr& b_deriv(int i, int j, int order) const {
    return db_[static_cast<std::size_t>(order)][static_cast<std::size_t>(i) * m_ + j];
  }

  void check_time(double t) const;

 private:
  std::size_t idx3(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * m_ + j) * n_ + k;
  }
  int m_, n_;
  double T_, alpha_;
  std::vector<ExprPtr> a_, b_;
  std::vector<std::vector<ExprPtr>> da_, db_;  // [order][entry]
};

// A(t, xi) and B(t).  Throws std::out_of_range if t is outside [0, T].
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> eval_system(const SystemSpec& spec, double t,
                                                        const Eigen::VectorXd& xi);

enum class SystemPart { A, B };

// Exact entrywise k-th t-derivative (k <= m-1).  Throws SingularPointError at
// abs-power kinks of order <= k.
Eigen::MatrixXd dt_derivative(const SystemSpec& spec, SystemPart which, int order, double t,
                              const Eigen::VectorXd& xi);

// Canonical key-value encoding and JSON interchange encoding.
SystemSpec parse_system_spec(const std::string& text);
std::string system_spec_to_text(const SystemSpec& spec);
SystemSpec parse_system_spec_json(const std::string& text);
std::string system_spec_to_json(const SystemSpec& spec);
SystemSpec load_system_spec(const std::string& path);  // sniffs the encoding

inline double xi_bracket(const Eigen::VectorXd& xi) { return std::sqrt(1.0 + xi.squaredNorm()); }

}  // namespace weakhyp
