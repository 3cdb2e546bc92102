#include "weakhyp/charpoly.hpp"

namespace weakhyp {

// One-pass Faddeev-LeVerrier recursion:
//   M_1 = I,  c_{m-1} = -tr(A M_1)
//   M_{k+1} = A M_k + c_{m-k} I,  c_{m-k-1} = -tr(A M_{k+1}) / (k+1)
// gives det(tau I - A) = tau^m + c_{m-1} tau^{m-1} + ... + c_0 and
// adj(tau I - A) = sum_{k=1..m} tau^{m-k} M_k.
CharPolyResult faddeev_leverrier(const Eigen::MatrixXd& A) {
  const int m = static_cast<int>(A.rows());
  CharPolyResult out;
  out.b.resize(static_cast<std::size_t>(m));
  out.adjugate = TauPolyMatrix(m);
  for (auto& p : out.adjugate.entries) p.c.assign(static_cast<std::size_t>(m), 0.0);

  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(m, m);
  for (int k = 1; k <= m; ++k) {
    // record M_k as the coefficient of tau^{m-k}
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out.adjugate.at(i, j).c[static_cast<std::size_t>(m - k)] = M(i, j);
    const double c = -(A * M).trace() / static_cast<double>(k);  // c_{m-k} = b_k
    out.b[static_cast<std::size_t>(k - 1)] = c;
    if (k < m) M = A * M + c * Eigen::MatrixXd::Identity(m, m);
  }
  return out;
}

std::vector<double> char_poly(const Eigen::MatrixXd& A) {
  const int m = static_cast<int>(A.rows());
  std::vector<double> b(static_cast<std::size_t>(m));
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(m, m);
  for (int k = 1; k <= m; ++k) {
    const double c = -(A * M).trace() / static_cast<double>(k);
    b[static_cast<std::size_t>(k - 1)] = c;
    if (k < m) M = A * M + c * Eigen::MatrixXd::Identity(m, m);
  }
  return b;
}

std::vector<double> char_poly_at(const SystemSpec& spec, double t, const Eigen::VectorXd& xi) {
  return char_poly(eval_system(spec, t, xi).first);
}

TauPolyMatrix adjugate_symbol(const SystemSpec& spec, double t, const Eigen::VectorXd& xi) {
  return faddeev_leverrier(eval_system(spec, t, xi).first).adjugate;
}

}  // namespace weakhyp
