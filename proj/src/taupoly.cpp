#include "weakhyp/taupoly.hpp"

namespace weakhyp {

int TauPoly::degree() const {
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    if (c[static_cast<std::size_t>(k)] != 0.0) return k;
  return -1;
}

std::complex<double> TauPoly::eval(std::complex<double> tau) const {
  std::complex<double> v = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    v = v * tau + c[static_cast<std::size_t>(k)];
  return v;
}

TauPoly TauPoly::dtau() const {
  TauPoly d;
  if (c.size() <= 1) return d;
  d.c.resize(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k)
    d.c[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

TauPoly& TauPoly::operator+=(const TauPoly& o) {
  if (o.c.size() > c.size()) c.resize(o.c.size());
  for (std::size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k];
  return *this;
}

TauPoly TauPoly::operator*(std::complex<double> s) const {
  TauPoly r = *this;
  for (auto& v : r.c) v *= s;
  return r;
}

TauPoly operator+(TauPoly a, const TauPoly& b) {
  a += b;
  return a;
}

TauPoly operator*(const TauPoly& a, const TauPoly& b) {
  TauPoly r;
  if (a.c.empty() || b.c.empty()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

int TauPolyMatrix::max_degree() const {
  int d = -1;
  for (const auto& p : entries) d = std::max(d, p.degree());
  return d;
}

Eigen::MatrixXcd TauPolyMatrix::eval(std::complex<double> tau) const {
  Eigen::MatrixXcd M(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) M(i, j) = at(i, j).eval(tau);
  return M;
}

TauPolyMatrix TauPolyMatrix::dtau(int order) const {
  TauPolyMatrix r = *this;
  for (int k = 0; k < order; ++k)
    for (auto& p : r.entries) p = p.dtau();
  return r;
}

TauPolyMatrix TauPolyMatrix::mul_matrix(const Eigen::MatrixXcd& M) const {
  TauPolyMatrix r(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      TauPoly s;
      for (int k = 0; k < m; ++k) s += at(i, k) * M(k, j);
      r.at(i, j) = s;
    }
  return r;
}

}  // namespace weakhyp
