#include "weakhyp/eigenfield.hpp"

#include <algorithm>
#include <cmath>

#include "weakhyp/charpoly.hpp"

namespace weakhyp {

std::vector<double> uniform_grid(double T, int nt) {
  std::vector<double> t(static_cast<std::size_t>(nt));
  for (int i = 0; i < nt; ++i)
    t[static_cast<std::size_t>(i)] = T * static_cast<double>(i) / (nt - 1);
  t.back() = T;
  return t;
}

Eigen::VectorXcd poly_roots(const std::vector<double>& b) {
  const int m = static_cast<int>(b.size());
  if (m == 1) {
    Eigen::VectorXcd r(1);
    r[0] = -b[0];
    return r;
  }
  // companion matrix of tau^m + b_1 tau^{m-1} + ... + b_m
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) comp(i, m - 1) = -b[static_cast<std::size_t>(m - 1 - i)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  return es.eigenvalues();
}

EigenField compute_eigenvalues(const SystemSpec& spec, const std::vector<double>& tgrid,
                               const Eigen::VectorXd& xi, double tol) {
  EigenField field;
  field.t = tgrid;
  field.xi = xi;
  field.xi_norm = xi.norm();
  field.bracket = xi_bracket(xi);
  field.tol = tol;
  const int m = spec.m();
  field.lambda.resize(static_cast<Eigen::Index>(tgrid.size()), m);

  const double imag_cap = tol * (1.0 + field.xi_norm);
  std::vector<double> roots(static_cast<std::size_t>(m));
  for (std::size_t it = 0; it < tgrid.size(); ++it) {
    auto b = char_poly_at(spec, tgrid[it], xi);
    Eigen::VectorXcd r = poly_roots(b);
    for (int j = 0; j < m; ++j) {
      if (std::abs(r[j].imag()) > imag_cap)
        throw HyperbolicityError(tgrid[it], field.xi_norm, std::abs(r[j].imag()));
      roots[static_cast<std::size_t>(j)] = r[j].real();
    }
    std::sort(roots.begin(), roots.end());
    for (int j = 0; j < m; ++j) field.lambda(static_cast<Eigen::Index>(it), j) = roots[static_cast<std::size_t>(j)];
  }
  return field;
}

double estimate_holder(const EigenField& field, double alpha, int j) {
  const int nt = field.nt();
  double sup = 0.0;
  for (int a = 0; a < nt; ++a)
    for (int b = a + 1; b < nt; ++b) {
      double num = std::fabs(field.lambda(a, j) - field.lambda(b, j));
      if (num == 0.0) continue;
      sup = std::max(sup, num / std::pow(field.t[static_cast<std::size_t>(b)] -
                                             field.t[static_cast<std::size_t>(a)],
                                         alpha));
    }
  return sup;
}

UniformityReport check_uniform_property(const EigenField& field) {
  UniformityReport rep;
  rep.xi_norm = field.xi_norm;
  const int m = field.m();
  if (m < 2) return rep;  // trivially passing, c = 0 by convention
  for (int it = 0; it < field.nt(); ++it) {
    for (int k = 1; k < m; ++k) {  // zero-based: gap lambda_{k+1} - lambda_k in 1-based terms
      const double gap = field.lambda(it, k) - field.lambda(it, k - 1);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) {
          const double num = std::fabs(field.lambda(it, i) - field.lambda(it, j));
          if (num == 0.0 && gap == 0.0) continue;  // vacuous 0/0
          if (gap == 0.0) {
            rep.pass = false;
            rep.i = i + 1;
            rep.j = j + 1;
            rep.k = k + 1;
            rep.t_index = it;
            rep.t = field.t[static_cast<std::size_t>(it)];
            return rep;
          }
          const double ratio = num / gap;
          if (ratio > rep.c) {
            rep.c = ratio;
            rep.i = i + 1;
            rep.j = j + 1;
            rep.k = k + 1;
            rep.t_index = it;
            rep.t = field.t[static_cast<std::size_t>(it)];
          }
        }
    }
  }
  return rep;
}

UniformityReport merge(const UniformityReport& a, const UniformityReport& b) {
  if (!a.pass) return a;
  if (!b.pass) return b;
  return a.c >= b.c ? a : b;
}

}  // namespace weakhyp
