#include <doctest.h>

#include <cmath>
#include <memory>

#include "weakhyp/frequency.hpp"
#include "weakhyp/system.hpp"

using namespace weakhyp;
using cplx = std::complex<double>;

TEST_CASE("dyadic grid invariants") {
  FrequencyGrid g1 = FrequencyGrid::dyadic(1, 6);
  REQUIRE(g1.radii.size() == 7);
  CHECK(g1.radii.front() == 1.0);
  CHECK(g1.radii.back() == 64.0);
  REQUIRE(g1.directions.size() == 2);
  CHECK(g1.directions[0][0] == 1.0);
  CHECK(g1.directions[1][0] == -1.0);
  CHECK(g1.xi(3, 1)[0] == doctest::Approx(-8.0));

  FrequencyGrid g3 = FrequencyGrid::dyadic(3, 4, 5);
  REQUIRE(g3.directions.size() == 5);
  for (const auto& d : g3.directions) CHECK(d.norm() == doctest::Approx(1.0));
  FrequencyGrid again = FrequencyGrid::dyadic(3, 4, 5);
  for (std::size_t k = 0; k < 5; ++k)
    CHECK((g3.directions[k] - again.directions[k]).norm() == 0.0);
}

TEST_CASE("integrator reproduces closed-form flows") {
  IntegratorOptions opt;
  std::vector<double> t_out = {0.0, 0.25, 0.5, 1.0};

  SUBCASE("scalar rotation stays on the circle") {
    const double omega = 13.0;
    auto f = [omega](double, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
      return cplx(0.0, omega) * y;
    };
    Eigen::VectorXcd y0(1);
    y0 << cplx(1.0, 0.0);
    auto ys = integrate_ode(f, y0, t_out, opt);
    REQUIRE(ys.size() == t_out.size());
    for (std::size_t k = 0; k < t_out.size(); ++k) {
      const cplx expect = std::exp(cplx(0.0, omega * t_out[k]));
      CHECK(std::abs(ys[k][0] - expect) <= 1e-8);
    }
  }
  SUBCASE("scalar decay") {
    auto f = [](double, const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return -y; };
    Eigen::VectorXcd y0(1);
    y0 << 2.0;
    auto ys = integrate_ode(f, y0, t_out, opt);
    CHECK(std::abs(ys.back()[0] - 2.0 * std::exp(-1.0)) <= 1e-8);
  }
  SUBCASE("stats are populated and max_step is respected") {
    auto f = [](double, const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return y; };
    Eigen::VectorXcd y0 = Eigen::VectorXcd::Ones(1);
    IntegratorOptions capped = opt;
    capped.max_step = 0.01;
    IntegratorStats st;
    integrate_ode(f, y0, t_out, capped, &st);
    CHECK(st.steps >= 100);
    CHECK(st.max_error_estimate <= 1.0);
  }
  SUBCASE("explosive stiffness raises the underflow error") {
    auto f = [](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
      return y / (1.0 - t);  // blows up at t = 1, forces h -> 0
    };
    Eigen::VectorXcd y0 = Eigen::VectorXcd::Ones(1);
    std::vector<double> out = {0.0, 1.0};
    CHECK_THROWS_AS(integrate_ode(f, y0, out, opt), StepSizeUnderflow);
  }
}

TEST_CASE("integrator matches a fixed-step RK4 reference on the wave system") {
  SystemSpec spec = parse_system_spec(
      "m = 2\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][1][1] = t^2\n");
  Eigen::VectorXd xi(1);
  xi << 1.0;
  Eigen::VectorXcd u0(2);
  u0 << cplx(1.0, 0.0), cplx(0.0, -0.5);
  std::vector<double> t_out = {0.0, 1.0};
  IntegratorOptions opt;
  auto ys = solve_original(spec, xi, u0, t_out, opt);

  // classical RK4 with 20000 steps on du/dt = i A u
  const cplx I(0.0, 1.0);
  auto f = [&](double t, const Eigen::VectorXcd& y) {
    auto [A, B] = eval_system(spec, t, xi);
    return Eigen::VectorXcd(I * ((A + B).cast<cplx>() * y));
  };
  Eigen::VectorXcd y = u0;
  const int N = 20000;
  const double h = 1.0 / N;
  for (int k = 0; k < N; ++k) {
    const double t = k * h;
    Eigen::VectorXcd k1 = f(t, y);
    Eigen::VectorXcd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    Eigen::VectorXcd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    Eigen::VectorXcd k4 = f(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  CHECK((ys.back() - y).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("looser tolerances give larger errors but stay controlled") {
  auto f = [](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return cplx(0.0, 1.0 + t * t) * y;
  };
  Eigen::VectorXcd y0 = Eigen::VectorXcd::Ones(1);
  std::vector<double> t_out = {0.0, 1.0};
  const cplx exact = std::exp(cplx(0.0, 1.0 + 1.0 / 3.0));
  double prev_err = -1.0;
  for (double rtol : {1e-5, 1e-8, 1e-11}) {
    IntegratorOptions opt;
    opt.rtol = rtol;
    opt.atol = 1e-14;
    const double err = std::abs(integrate_ode(f, y0, t_out, opt).back()[0] - exact);
    CHECK(err <= 1e3 * rtol);
    if (prev_err >= 0.0) CHECK(err <= prev_err + 1e-14);
    prev_err = err;
  }
}

TEST_CASE("gevrey data phases") {
  GevreyData d;
  CHECK(d.log_amplitude(std::sqrt(2.0)) ==
        doctest::Approx(-std::pow(std::sqrt(2.0), 1.0 / 1.5)));
  Eigen::VectorXcd p = d.phases(3, 2, 0);
  for (int i = 0; i < 3; ++i) CHECK(p[i] == cplx(1.0, 0.0));  // deterministic default
  GevreyData r = d;
  r.random_phases = true;
  Eigen::VectorXcd a = r.phases(3, 2, 0);
  Eigen::VectorXcd b = r.phases(3, 2, 0);
  CHECK((a - b).norm() == 0.0);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i]) == doctest::Approx(1.0));
  r.seed = 1;
  CHECK((r.phases(3, 2, 0) - a).norm() > 1e-3);
}

TEST_CASE("initial data lift") {
  Eigen::VectorXd xi(1);
  xi << 3.0;
  SUBCASE("scalar case is the identity") {
    SystemSpec spec = parse_system_spec("m = 1\nn = 1\nT = 1\nalpha = 1\nA[1][1][1] = t\n");
    Eigen::VectorXcd g0(1);
    g0 << cplx(0.3, -0.4);
    Eigen::VectorXcd U0 = lift_initial(spec, xi, g0);
    REQUIRE(U0.size() == 1);
    CHECK(std::abs(U0[0] - g0[0]) == 0.0);
  }
  SUBCASE("m = 2 matches the hand recursion") {
    // D_t u(0) = (A(0) + B(0)) u(0); layout [ <xi> u_1, (D_t u)_1, <xi> u_2, (D_t u)_2 ]
    SystemSpec spec = parse_system_spec(
        "m = 2\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][1][1] = 1\nB[2][1] = 2\n");
    Eigen::VectorXcd g0(2);
    g0 << cplx(1.0, 0.0), cplx(0.0, 1.0);
    Eigen::VectorXcd U0 = lift_initial(spec, xi, g0);
    const double br = xi_bracket(xi);
    auto [A, B] = eval_system(spec, 0.0, xi);
    Eigen::VectorXcd du = (A + B).cast<cplx>() * g0;
    REQUIRE(U0.size() == 4);
    CHECK(std::abs(U0[0] - br * g0[0]) <= 1e-12);
    CHECK(std::abs(U0[1] - du[0]) <= 1e-12);
    CHECK(std::abs(U0[2] - br * g0[1]) <= 1e-12);
    CHECK(std::abs(U0[3] - du[1]) <= 1e-12);
  }
  SUBCASE("kink at t = 0 is tagged unless nudged") {
    // m = 3 needs the first t-derivative of A at 0, undefined for abs(t)
    SystemSpec spec = parse_system_spec(
        "m = 3\nn = 1\nT = 1\nalpha = 0.5\n"
        "A[1][2][1] = 1\nA[2][3][1] = 1\nA[3][2][1] = abs(t)^1\n");
    Eigen::VectorXcd g0(3);
    g0 << 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(lift_initial(spec, xi, g0), SingularPointError);
    CHECK_NOTHROW(lift_initial(spec, xi, g0, 1e-9));
  }
}

TEST_CASE("reduced flow is consistent with the original flow") {
  auto spec = std::make_shared<SystemSpec>(parse_system_spec(
      "m = 2\nn = 1\nT = 1\nalpha = 1\nA[1][2][1] = 1\nA[2][1][1] = t^2\nB[2][2] = 1\n"));
  ReducedSystem red = to_block_sylvester(spec);
  Eigen::VectorXd xi(1);
  xi << 8.0;
  const double br = xi_bracket(xi);
  Eigen::VectorXcd g0(2);
  g0 << cplx(0.6, 0.8), cplx(-1.0, 0.2);
  std::vector<double> t_out = uniform_grid(1.0, 17);
  IntegratorOptions opt;
  opt.max_step = 0.1 / br;
  auto u = solve_original(*spec, xi, g0, t_out, opt);
  auto V = solve_reduced(red, xi, lift_initial(*spec, xi, g0), t_out, opt);
  for (std::size_t k = 0; k < t_out.size(); ++k) {
    const double scale = br * u[k].cwiseAbs().maxCoeff();
    CHECK(std::abs(br * u[k][0] - V[k][0]) / scale <= 1e-7);
    CHECK(std::abs(br * u[k][1] - V[k][2]) / scale <= 1e-7);
  }
}

TEST_CASE("weighted transform round trips and scalar case is explicit") {
  RegularizedEigenField reg;
  reg.t = uniform_grid(1.0, 5);
  reg.bracket = 5.0;
  reg.eps = 0.1;
  reg.alpha = 1.0;
  WeightPlan plan;
  plan.s = 1.5;
  plan.rho0 = 2.0;
  plan.kappa = 0.5;

  SUBCASE("m = 1 applies the pure exponential weight") {
    reg.lam_eps = Eigen::MatrixXd::Constant(5, 1, 3.0);
    reg.dlam_eps = Eigen::MatrixXd::Zero(5, 1);
    Eigen::VectorXcd V(1);
    V << cplx(0.3, 0.4);
    const int it = 2;
    ScaledVector W = w_transform(V, reg, plan, it);
    const double rho = plan.rho0 - plan.kappa * reg.t[it];
    CHECK(W.log_norm() ==
          doctest::Approx(rho * std::pow(5.0, 1.0 / 1.5) + std::log(0.5)).epsilon(1e-12));
  }
  SUBCASE("m = 2 round trip") {
    reg.lam_eps.resize(5, 2);
    reg.dlam_eps = Eigen::MatrixXd::Zero(5, 2);
    for (int it = 0; it < 5; ++it) {
      reg.lam_eps(it, 0) = -2.0 - reg.t[static_cast<std::size_t>(it)];
      reg.lam_eps(it, 1) = 1.0;
    }
    Eigen::VectorXcd V(4);
    V << cplx(1.0, 2.0), cplx(-0.5, 0.1), cplx(0.0, -3.0), cplx(0.7, 0.7);
    for (int it : {0, 3}) {
      ScaledVector W = w_transform(V, reg, plan, it);
      ScaledVector back = w_inverse(W, reg, plan, it);
      Eigen::VectorXcd Vback = std::exp(back.log_scale) * back.v;
      CHECK((Vback - V).cwiseAbs().maxCoeff() <= 1e-12 * V.norm());
    }
  }
}

TEST_CASE("energy check over log norms") {
  std::vector<double> dec = {0.0, -0.5, -1.0, -1.5};
  EnergyCheck ec = check_energy(dec);
  CHECK(ec.pass);
  CHECK(ec.max_ratio == doctest::Approx(1.0));
  CHECK(ec.argmax_index == 0);

  std::vector<double> grow = {0.0, 0.1, 1.0, 0.2};
  ec = check_energy(grow);
  CHECK_FALSE(ec.pass);
  CHECK(ec.argmax_index == 2);
  CHECK(ec.max_ratio == doctest::Approx(std::exp(1.0)));

  std::vector<double> tiny = {0.0, 1e-12};
  CHECK(check_energy(tiny, 1e-8).pass);
  CHECK_THROWS_AS(check_energy({}), std::invalid_argument);
}

TEST_CASE("decay fit recovers synthetic rates") {
  std::vector<double> brackets, radii, logv;
  const double s = 1.5, delta0 = 0.8, c0 = 0.3;
  for (int k = 0; k <= 10; ++k) {
    const double r = std::pow(2.0, k);
    const double br = std::sqrt(1.0 + r * r);
    brackets.push_back(br);
    radii.push_back(r);
    logv.push_back(-delta0 * std::pow(br, 1.0 / s) - c0);
  }
  SUBCASE("exact power law") {
    DecayFit fit = fit_decay(brackets, radii, logv, s, 1.0);
    CHECK(fit.delta == doctest::Approx(delta0).epsilon(1e-10));
    CHECK(fit.residual <= 1e-10);
    CHECK(fit.n_points == 11);
    CHECK_FALSE(fit.fully_decayed);
  }
  SUBCASE("cutoff radius drops small frequencies") {
    DecayFit fit = fit_decay(brackets, radii, logv, s, 16.0);
    CHECK(fit.n_points == 7);
    CHECK(fit.delta == doctest::Approx(delta0).epsilon(1e-10));
  }
  SUBCASE("log correction column recovers the polynomial factor") {
    std::vector<double> lossy = logv;
    for (std::size_t k = 0; k < lossy.size(); ++k) lossy[k] += 2.5 * std::log(brackets[k]);
    DecayFit plain = fit_decay(brackets, radii, lossy, s, 1.0);
    DecayFit corr = fit_decay(brackets, radii, lossy, s, 1.0, true);
    CHECK(corr.delta == doctest::Approx(delta0).epsilon(1e-8));
    CHECK(std::fabs(corr.log_poly_coeff - -2.5) <= 1e-8);
    CHECK(corr.residual <= plain.residual);
  }
  SUBCASE("samples under the floor are flagged") {
    std::vector<double> dead(brackets.size(), -800.0);
    DecayFit fit = fit_decay(brackets, radii, dead, s, 1.0);
    CHECK(fit.fully_decayed);
  }
}
