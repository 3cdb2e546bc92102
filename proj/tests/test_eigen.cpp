#include <doctest.h>

#include <cmath>
#include <memory>

#include "weakhyp/eigenfield.hpp"
#include "weakhyp/system.hpp"

using namespace weakhyp;

namespace {

EigenField field_of(const std::string& text, double xi_val, int nt = 513) {
  SystemSpec spec = parse_system_spec(text);
  Eigen::VectorXd xi(1);
  xi << xi_val;
  return compute_eigenvalues(spec, uniform_grid(spec.T(), nt), xi);
}

}  // namespace

TEST_CASE("uniform_grid endpoints and spacing") {
  auto g = uniform_grid(2.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(2.0));
  CHECK(g[1] - g[0] == doctest::Approx(0.5));
}

TEST_CASE("wave eigenvalues are plus minus t xi") {
  EigenField f = field_of(
      "m = 2\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][1][1] = t^2\n", 4.0);
  for (int it = 0; it < f.nt(); ++it) {
    const double t = f.t[static_cast<std::size_t>(it)];
    CHECK(f.lambda(it, 0) == doctest::Approx(-t * 4.0).epsilon(1e-9));
    CHECK(f.lambda(it, 1) == doctest::Approx(t * 4.0).epsilon(1e-9));
  }
  CHECK(f.bracket == doctest::Approx(std::sqrt(17.0)));
}

TEST_CASE("triple degenerate root at t = 0") {
  // delta = tau^3 - 3 t^2 xi^2 tau: roots 0, +-sqrt(3) t xi
  EigenField f = field_of(
      "m = 3\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][3][1] = 1\nA[3][2][1] = 3*t^2\n",
      2.0, 257);
  CHECK(std::fabs(f.lambda(0, 0)) <= 1e-8);
  CHECK(std::fabs(f.lambda(0, 2)) <= 1e-8);
  const double t = f.t.back();
  CHECK(f.lambda(f.nt() - 1, 2) == doctest::Approx(std::sqrt(3.0) * t * 2.0).epsilon(1e-9));
  CHECK(f.lambda(f.nt() - 1, 0) == doctest::Approx(-std::sqrt(3.0) * t * 2.0).epsilon(1e-9));
  CHECK(std::fabs(f.lambda(f.nt() - 1, 1)) <= 1e-8);
}

TEST_CASE("poly_roots against closed forms") {
  // tau^2 - 5 tau + 6
  auto r = poly_roots({-5.0, 6.0});
  std::vector<double> re = {r[0].real(), r[1].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(2.0));
  CHECK(re[1] == doctest::Approx(3.0));
  // tau^3 - tau: roots -1, 0, 1
  r = poly_roots({0.0, -1.0, 0.0});
  re = {r[0].real(), r[1].real(), r[2].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-1.0));
  CHECK(re[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(re[2] == doctest::Approx(1.0));
}

TEST_CASE("non real spectrum is rejected") {
  // rotation generator: eigenvalues +-i xi
  CHECK_THROWS_AS(
      field_of("m = 2\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][1][1] = 0 - 1\n", 3.0),
      HyperbolicityError);
}

TEST_CASE("holder seminorm estimates") {
  SUBCASE("constant field has seminorm zero") {
    EigenField f = field_of(
        "m = 2\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][1][1] = 1\n", 1.0, 129);
    CHECK(estimate_holder(f, 0.5, 0) == doctest::Approx(0.0));
  }
  SUBCASE("linear eigenvalue, alpha = 1") {
    EigenField f = field_of(
        "m = 2\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][1][1] = t^2\n", 1.0, 513);
    // lambda_2 = t xi: Lipschitz constant exactly |xi| = 1
    CHECK(estimate_holder(f, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("square root eigenvalue, alpha = 1/2") {
    // A = [[0, 1], [abs(t), 0]] xi: lambda_2 = sqrt(t) xi on [0, T],
    // |sqrt(t) - sqrt(s)| <= |t - s|^{1/2} with equality approached at s = 0
    EigenField f = field_of(
        "m = 2\nn = 1\nT = 1\nalpha = 0.5\nA[1][2][1] = 1\nA[2][1][1] = abs(t)^1\n", 1.0, 513);
    const double c = estimate_holder(f, 0.5, 1);
    CHECK(c >= 0.99);
    CHECK(c <= 1.0 + 1e-9);
  }
}

TEST_CASE("uniformity of root separation") {
  SUBCASE("wave roots give constant 1") {
    EigenField f = field_of(
        "m = 2\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][1][1] = t^2\n", 2.0, 257);
    UniformityReport rep = check_uniform_property(f);
    CHECK(rep.pass);
    CHECK(rep.c == doctest::Approx(1.0));
  }
  SUBCASE("equispaced triple roots give constant 2") {
    // roots 0, t xi, 2 t xi: max pair gap / min adjacent gap = 2 everywhere.
    // Built as a companion-style block with roots {-t xi, 0, t xi} shifted by
    // t xi I, which keeps every entry linear in xi.
    EigenField f = field_of(
        "m = 3\nn = 1\nT = 1\nalpha = 1\n"
        "A[1][2][1] = 1\nA[2][3][1] = 1\nA[3][2][1] = t^2\n"
        "A[1][1][1] = t\nA[2][2][1] = t\nA[3][3][1] = t\n",
        1.5, 257);
    UniformityReport rep = check_uniform_property(f);
    CHECK(rep.pass);
    CHECK(rep.c == doctest::Approx(2.0).epsilon(1e-8));
  }
  SUBCASE("roots 0, t, 1 fail with a witness near t = 0") {
    EigenField f;
    f.t = uniform_grid(1.0, 101);
    f.xi = Eigen::VectorXd::Zero(1);
    f.lambda.resize(101, 3);
    for (int it = 0; it < 101; ++it) {
      f.lambda(it, 0) = 0.0;
      f.lambda(it, 1) = f.t[static_cast<std::size_t>(it)];
      f.lambda(it, 2) = 1.0;
    }
    UniformityReport rep = check_uniform_property(f);
    CHECK_FALSE(rep.pass);
    CHECK(rep.t_index == 0);
  }
}

TEST_CASE("merge keeps the worse report") {
  UniformityReport a, b;
  a.c = 1.0;
  b.c = 3.0;
  CHECK(merge(a, b).c == doctest::Approx(3.0));
  b.pass = false;
  b.t_index = 7;
  UniformityReport m = merge(a, b);
  CHECK_FALSE(m.pass);
  CHECK(m.t_index == 7);
}
