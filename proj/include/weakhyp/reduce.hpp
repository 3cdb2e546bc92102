#pragma once

#include <memory>

#include <Eigen/Dense>

#include "weakhyp/charpoly.hpp"
#include "weakhyp/system.hpp"
#include "weakhyp/taupoly.hpp"

namespace weakhyp {

// Matrix of lower order terms C(t, tau, xi) from the symbol composition
//   L # (D_t I - A - B) = delta I - C,
// exact for t-only symbols:
//   C = L B + sum_{k=1..m-1} (1/k!) (d/dtau)^k L * D_t^k (A + B),
// with D_t = -i d/dt.  Every entry has tau-degree <= m-1.
TauPolyMatrix lower_order_matrix(const SystemSpec& spec, double t, const Eigen::VectorXd& xi);

// The m^2 x m^2 block Sylvester pair (script A, script L), evaluable at any
// (t, xi).  Script A is block diagonal with m identical companion blocks
// scaled so every entry is an order-1 symbol; script L is nonzero only in the
// last row of each block, entries are order-0 symbols.
class ReducedSystem {
 public:
  explicit ReducedSystem(std::shared_ptr<const SystemSpec> spec) : spec_(std::move(spec)) {}

  const SystemSpec& spec() const { return *spec_; }
  int m() const { return spec_->m(); }
  int size() const { return spec_->m() * spec_->m(); }

  // One m x m companion block of script A (all m blocks are identical).
  Eigen::MatrixXd block_A(double t, const Eigen::VectorXd& xi) const;
  // Full m^2 x m^2 script A.
  Eigen::MatrixXd eval_A(double t, const Eigen::VectorXd& xi) const;
  // Full m^2 x m^2 script L.
  Eigen::MatrixXcd eval_L(double t, const Eigen::VectorXd& xi) const;

  // Opt-in handling of abs-power kinks: when eta > 0, an eval_L query whose
  // coefficient derivative is undefined exactly at t retries at t + eta
  // (then t - eta).  Default 0 keeps the tagged error.
  void set_kink_nudge(double eta) { kink_eta_ = eta; }
  double kink_nudge() const { return kink_eta_; }

 private:
  std::shared_ptr<const SystemSpec> spec_;
  double kink_eta_ = 0.0;
};

ReducedSystem to_block_sylvester(std::shared_ptr<const SystemSpec> spec);

}  // namespace weakhyp
