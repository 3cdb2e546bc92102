#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace weakhyp {

// Polynomial in tau with complex coefficients, c[k] multiplying tau^k.
// Trailing zero coefficients are kept as-is; degree() ignores them.
struct TauPoly {
  std::vector<std::complex<double>> c;

  TauPoly() = default;
  explicit TauPoly(std::vector<std::complex<double>> coeffs) : c(std::move(coeffs)) {}
  static TauPoly zero() { return TauPoly(); }
  static TauPoly constant(std::complex<double> v) { return TauPoly({v}); }

  int degree() const;
  std::complex<double> eval(std::complex<double> tau) const;
  std::complex<double> coeff(int k) const {
    return k < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(k)] : 0.0;
  }

  TauPoly dtau() const;  // d/dtau
  TauPoly& operator+=(const TauPoly& o);
  TauPoly operator*(std::complex<double> s) const;
};

TauPoly operator+(TauPoly a, const TauPoly& b);
TauPoly operator*(const TauPoly& a, const TauPoly& b);

// Dense m x m matrix of tau-polynomials.
struct TauPolyMatrix {
  int m = 0;
  std::vector<TauPoly> entries;  // row-major

  TauPolyMatrix() = default;
  explicit TauPolyMatrix(int size) : m(size), entries(static_cast<std::size_t>(size) * size) {}

  TauPoly& at(int i, int j) { return entries[static_cast<std::size_t>(i) * m + j]; }
  const TauPoly& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * m + j]; }

  int max_degree() const;
  Eigen::MatrixXcd eval(std::complex<double> tau) const;
  TauPolyMatrix dtau(int order = 1) const;

  // this * M with M a constant complex matrix.
  TauPolyMatrix mul_matrix(const Eigen::MatrixXcd& M) const;
};

}  // namespace weakhyp
