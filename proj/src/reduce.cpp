#include "weakhyp/reduce.hpp"

#include <cmath>
#include <complex>

namespace weakhyp {

TauPolyMatrix lower_order_matrix(const SystemSpec& spec, double t, const Eigen::VectorXd& xi) {
  const int m = spec.m();
  auto fl = faddeev_leverrier(eval_system(spec, t, xi).first);
  const TauPolyMatrix& L = fl.adjugate;

  Eigen::MatrixXcd B = eval_system(spec, t, xi).second.cast<std::complex<double>>();
  TauPolyMatrix C = L.mul_matrix(B);

  const std::complex<double> minus_i(0.0, -1.0);
  std::complex<double> Dt_factor = 1.0;  // (-i)^k
  double kfact = 1.0;
  TauPolyMatrix Lk = L;
  for (int k = 1; k <= m - 1; ++k) {
    Lk = Lk.dtau();
    Dt_factor *= minus_i;
    kfact *= static_cast<double>(k);
    Eigen::MatrixXcd P = (dt_derivative(spec, SystemPart::A, k, t, xi) +
                          dt_derivative(spec, SystemPart::B, k, t, xi))
                             .cast<std::complex<double>>();
    P *= Dt_factor / kfact;
    TauPolyMatrix term = Lk.mul_matrix(P);
    for (std::size_t e = 0; e < C.entries.size(); ++e) C.entries[e] += term.entries[e];
  }
  return C;
}

Eigen::MatrixXd ReducedSystem::block_A(double t, const Eigen::VectorXd& xi) const {
  const int m = spec_->m();
  const double br = xi_bracket(xi);
  auto b = char_poly_at(*spec_, t, xi);
  Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(m, m);
  for (int r = 0; r + 1 < m; ++r) blk(r, r + 1) = 1.0;
  // last row entry (m, r) = -b_{m-r+1} <xi>^{-(m-r+1)}, 1-based r
  for (int r = 1; r <= m; ++r)
    blk(m - 1, r - 1) = -b[static_cast<std::size_t>(m - r)] * std::pow(br, -(m - r + 1));
  return br * blk;
}

Eigen::MatrixXd ReducedSystem::eval_A(double t, const Eigen::VectorXd& xi) const {
  const int m = spec_->m();
  Eigen::MatrixXd blk = block_A(t, xi);
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(m * m, m * m);
  for (int q = 0; q < m; ++q) full.block(q * m, q * m, m, m) = blk;
  return full;
}

Eigen::MatrixXcd ReducedSystem::eval_L(double t, const Eigen::VectorXd& xi) const {
  const int m = spec_->m();
  const double br = xi_bracket(xi);
  TauPolyMatrix C = [&] {
    try {
      return lower_order_matrix(*spec_, t, xi);
    } catch (const SingularPointError&) {
      if (kink_eta_ <= 0.0) throw;
      try {
        return lower_order_matrix(*spec_, t + kink_eta_, xi);
      } catch (const std::exception&) {
        return lower_order_matrix(*spec_, t - kink_eta_, xi);
      }
    }
  }();
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(m * m, m * m);
  // row i*m (1-based), column (j-1)m + r + 1 carries c_{ij,r} <xi>^{r+1-m}
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      for (int r = 0; r <= m - 1; ++r)
        full(i * m - 1, (j - 1) * m + r) =
            C.at(i - 1, j - 1).coeff(r) * std::pow(br, r + 1 - m);
  return full;
}

ReducedSystem to_block_sylvester(std::shared_ptr<const SystemSpec> spec) {
  return ReducedSystem(std::move(spec));
}

}  // namespace weakhyp
