#include <doctest.h>

#include <cmath>

#include "weakhyp/mollifier.hpp"
#include "weakhyp/system.hpp"

using namespace weakhyp;

namespace {

EigenField synthetic_field(int nt, int m, double bracket,
                           double (*lam)(double t, int j)) {
  EigenField f;
  f.t = uniform_grid(1.0, nt);
  f.xi = Eigen::VectorXd::Zero(1);
  f.bracket = bracket;
  f.xi_norm = std::sqrt(bracket * bracket - 1.0);
  f.lambda.resize(nt, m);
  for (int it = 0; it < nt; ++it)
    for (int j = 0; j < m; ++j) f.lambda(it, j) = lam(f.t[static_cast<std::size_t>(it)], j);
  return f;
}

}  // namespace

TEST_CASE("gauss_legendre reproduces known rules") {
  std::vector<double> x, w;
  gauss_legendre(2, x, w);
  CHECK(x[0] == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(x[1] == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(w[0] == doctest::Approx(1.0));
  gauss_legendre(3, x, w);
  CHECK(x[1] == doctest::Approx(0.0));
  CHECK(w[1] == doctest::Approx(8.0 / 9.0));
  // degree-5 exactness of the 3 point rule: integral of x^4 on [-1, 1] = 2/5
  double s = 0.0;
  for (int q = 0; q < 3; ++q) s += w[static_cast<std::size_t>(q)] * std::pow(x[static_cast<std::size_t>(q)], 4);
  CHECK(s == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("canonical bump is normalized and even") {
  MollifierSpec mol = MollifierSpec::canonical();
  CHECK(mol.mass() == doctest::Approx(1.0).epsilon(1e-14));
  // refinement changes the mass by less than 1e-12: the rule is converged
  CHECK(std::fabs(mol.mass_independent(24, 40) - 1.0) <= 1e-12);
  CHECK(mol.phi(0.3) == doctest::Approx(mol.phi(-0.3)));
  CHECK(mol.phi(1.0) == 0.0);
  CHECK(mol.phi(2.0) == 0.0);
  // derivative weights integrate phi' to zero by symmetry
  double s = 0.0;
  for (double w : mol.wdphi()) s += w;
  CHECK(std::fabs(s) <= 1e-15);
}

TEST_CASE("constant eigenvalues shift by the exact separation term") {
  EigenField f = synthetic_field(257, 3, 2.0, [](double, int) { return 5.0; });
  MollifierSpec mol = MollifierSpec::canonical();
  const double eps = 0.125, alpha = 0.5;
  RegularizedEigenField reg = mollify(f, mol, eps, alpha);
  const double sep = std::pow(eps, alpha) * 2.0;
  for (int it = 0; it < reg.nt(); ++it)
    for (int j = 0; j < 3; ++j) {
      CHECK(reg.lam_eps(it, j) == doctest::Approx(5.0 + (j + 1) * sep).epsilon(1e-13));
      CHECK(std::fabs(reg.dlam_eps(it, j)) <= 1e-12);
    }
  RegularizationConstants pc = verify_regularized_bounds(reg, f, 1.0);
  CHECK(pc.c_i <= 1e-12);
  CHECK(pc.c_ii == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(pc.separation_ok);
  CHECK(pc.worst_separation_margin == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("linear eigenvalue is reproduced exactly in the interior") {
  // lambda = 4 t: even mollifier kills the linear correction, so the
  // convolution equals 4 t and the derivative equals 4 wherever the support
  // of phi_eps stays inside [0, T].
  EigenField f = synthetic_field(513, 1, 1.0, [](double t, int) { return 4.0 * t; });
  MollifierSpec mol = MollifierSpec::canonical();
  const double eps = 0.0625, alpha = 1.0;
  RegularizedEigenField reg = mollify(f, mol, eps, alpha);
  const double shift = eps * 1.0;  // (j + 1) eps^alpha <xi> with j = 0
  for (int it = 0; it < reg.nt(); ++it) {
    const double t = reg.t[static_cast<std::size_t>(it)];
    if (t < eps || t > 1.0 - eps) continue;
    CHECK(reg.lam_eps(it, 0) == doctest::Approx(4.0 * t + shift).epsilon(1e-10));
    CHECK(reg.dlam_eps(it, 0) == doctest::Approx(4.0).epsilon(1e-8));
  }
}

TEST_CASE("under-resolved eps is rejected") {
  EigenField f = synthetic_field(33, 1, 1.0, [](double, int) { return 0.0; });
  MollifierSpec mol = MollifierSpec::canonical();
  CHECK_THROWS_AS(mollify(f, mol, 0.01, 1.0), std::invalid_argument);   // 4 dt = 0.125
  CHECK_THROWS_AS(mollify(f, mol, -1.0, 1.0), std::invalid_argument);
  CHECK_NOTHROW(mollify(f, mol, 0.25, 1.0));
}

TEST_CASE("holder eigenvalue obeys the derivative and distance scalings") {
  // lambda = sqrt(t), alpha = 1/2: c_i and c_ii should stay bounded across a
  // dyadic eps sweep (within a factor 2 band), which is the scaling the
  // regularization is designed to achieve.
  EigenField f = synthetic_field(4097, 1, 1.0, [](double t, int) { return std::sqrt(t); });
  MollifierSpec mol = MollifierSpec::canonical();
  const double alpha = 0.5;
  double lo_i = 1e300, hi_i = 0.0, lo_ii = 1e300, hi_ii = 0.0;
  for (int k = 3; k <= 9; ++k) {
    const double eps = std::pow(2.0, -k);
    RegularizationConstants pc = verify_regularized_bounds(mollify(f, mol, eps, alpha), f, 0.9);
    lo_i = std::min(lo_i, pc.c_i);
    hi_i = std::max(hi_i, pc.c_i);
    lo_ii = std::min(lo_ii, pc.c_ii);
    hi_ii = std::max(hi_ii, pc.c_ii);
    CHECK(pc.separation_ok);
  }
  CHECK(hi_i <= 2.0 * lo_i);
  CHECK(hi_ii <= 2.0 * lo_ii);
}
