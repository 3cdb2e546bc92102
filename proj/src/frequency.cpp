#include "weakhyp/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace weakhyp {

FrequencyGrid FrequencyGrid::dyadic(int n, int K, int n_directions) {
  if (n < 1 || K < 0 || n_directions < 1)
    throw std::invalid_argument("FrequencyGrid::dyadic: bad parameters");
  FrequencyGrid g;
  g.radii.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) g.radii.push_back(std::ldexp(1.0, k));
  if (n == 1) {
    g.directions.push_back(Eigen::VectorXd::Constant(1, 1.0));
    if (n_directions > 1) g.directions.push_back(Eigen::VectorXd::Constant(1, -1.0));
  } else if (n == 2) {
    for (int d = 0; d < n_directions; ++d) {
      const double th = 2.0 * M_PI * d / n_directions;
      Eigen::VectorXd e(2);
      e << std::cos(th), std::sin(th);
      g.directions.push_back(e);
    }
  } else {
    // fixed-seed Gaussian directions, reproducible across platforms
    std::mt19937_64 rng(0x5eed0d1ull + static_cast<std::uint64_t>(n));
    auto unit = [&rng] {
      // uniform in [0,1) from the top 53 bits
      return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (int d = 0; d < n_directions; ++d) {
      Eigen::VectorXd e(n);
      for (int k = 0; k < n; ++k) {
        const double u1 = std::max(unit(), 1e-300), u2 = unit();
        e[k] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      }
      g.directions.push_back(e.normalized());
    }
  }
  return g;
}

std::vector<Eigen::VectorXcd> integrate_ode(
    const std::function<Eigen::VectorXcd(double, const Eigen::VectorXcd&)>& f,
    const Eigen::VectorXcd& y0, const std::vector<double>& t_out, const IntegratorOptions& opt,
    IntegratorStats* stats) {
  if (t_out.empty()) throw std::invalid_argument("integrate_ode: empty output grid");
  for (std::size_t i = 1; i < t_out.size(); ++i)
    if (!(t_out[i] > t_out[i - 1]))
      throw std::invalid_argument("integrate_ode: output times must increase");

  // Dormand-Prince 5(4)
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  IntegratorStats local;
  std::vector<Eigen::VectorXcd> out;
  out.reserve(t_out.size());
  double t = t_out.front();
  Eigen::VectorXcd y = y0;
  out.push_back(y);

  const double span = t_out.back() - t;
  double h = span / 100.0;
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  Eigen::VectorXcd k1 = f(t, y);  // FSAL
  for (std::size_t next = 1; next < t_out.size(); ++next) {
    const double t_goal = t_out[next];
    while (t < t_goal) {
      bool clipped = false;
      double hs = h;
      if (t + hs >= t_goal) {
        hs = t_goal - t;
        clipped = true;
      }
      const Eigen::VectorXcd k2 = f(t + c2 * hs, y + hs * (a21 * k1));
      const Eigen::VectorXcd k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
      const Eigen::VectorXcd k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
      const Eigen::VectorXcd k5 =
          f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Eigen::VectorXcd k6 =
          f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const Eigen::VectorXcd ynew =
          y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const Eigen::VectorXcd k7 = f(t + hs, ynew);
      const Eigen::VectorXcd err_v =
          hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double err = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double sc =
            opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double r = std::abs(err_v[i]) / sc;
        err += r * r;
      }
      err = std::sqrt(err / static_cast<double>(y.size()));

      if (err <= 1.0) {
        t = clipped ? t_goal : t + hs;
        y = ynew;
        k1 = k7;
        ++local.steps;
        local.max_error_estimate = std::max(local.max_error_estimate, err);
      } else {
        ++local.rejected;
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
      fac = std::min(5.0, std::max(0.2, fac));
      h = hs * fac;
      if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
      if (h < 1e-14 * std::max(1.0, std::fabs(t))) throw StepSizeUnderflow(t, h);
    }
    out.push_back(y);
  }
  if (stats) *stats = local;
  return out;
}

Eigen::VectorXcd GevreyData::phases(int m, int radius_index, int dir_index) const {
  Eigen::VectorXcd p(m);
  if (!random_phases) {
    p.setOnes();
    return p;
  }
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull +
                      static_cast<std::uint64_t>(radius_index) * 8191ull +
                      static_cast<std::uint64_t>(dir_index) * 131ull + 17ull);
  for (int k = 0; k < m; ++k) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double th = 2.0 * M_PI * u;
    p[k] = std::complex<double>(std::cos(th), std::sin(th));
  }
  return p;
}

std::vector<Eigen::VectorXcd> solve_original(const SystemSpec& spec, const Eigen::VectorXd& xi,
                                             const Eigen::VectorXcd& g0hat,
                                             const std::vector<double>& t_out,
                                             const IntegratorOptions& opt,
                                             IntegratorStats* stats) {
  const std::complex<double> I(0.0, 1.0);
  auto f = [&spec, &xi, I](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    auto [A, B] = eval_system(spec, t, xi);
    return I * ((A + B).cast<std::complex<double>>() * y);
  };
  return integrate_ode(f, g0hat, t_out, opt, stats);
}

Eigen::VectorXcd lift_initial(const SystemSpec& spec, const Eigen::VectorXd& xi,
                              const Eigen::VectorXcd& g0hat, double kink_nudge) {
  const int m = spec.m();
  const std::complex<double> mi(0.0, -1.0);  // D_t = -i d/dt
  // D_t^j (A + B)(0) for j = 0 .. m-2
  std::vector<Eigen::MatrixXcd> M;
  for (int j = 0; j + 1 < m; ++j) {
    Eigen::MatrixXd d(m, m);
    try {
      d = dt_derivative(spec, SystemPart::A, j, 0.0, xi) +
          dt_derivative(spec, SystemPart::B, j, 0.0, xi);
    } catch (const SingularPointError&) {
      if (!(kink_nudge > 0.0)) throw;
      d = dt_derivative(spec, SystemPart::A, j, kink_nudge, xi) +
          dt_derivative(spec, SystemPart::B, j, kink_nudge, xi);
    }
    M.push_back(std::pow(mi, j) * d.cast<std::complex<double>>());
  }
  // u_k = D_t^k u(0) from D_t^k u = sum_j binom(k-1, j) (D_t^j (A+B)) D_t^{k-1-j} u
  std::vector<Eigen::VectorXcd> u(static_cast<std::size_t>(m));
  u[0] = g0hat;
  for (int k = 1; k < m; ++k) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(m);
    double binom = 1.0;
    for (int j = 0; j <= k - 1; ++j) {
      acc += binom * (M[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(k - 1 - j)]);
      binom = binom * (k - 1 - j) / (j + 1);
    }
    u[static_cast<std::size_t>(k)] = acc;
  }
  const double br = xi_bracket(xi);
  Eigen::VectorXcd U0(m * m);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      U0[(i - 1) * m + (j - 1)] =
          std::pow(br, m - j) * u[static_cast<std::size_t>(j - 1)][i - 1];
  return U0;
}

std::vector<Eigen::VectorXcd> solve_reduced(const ReducedSystem& reduced,
                                            const Eigen::VectorXd& xi,
                                            const Eigen::VectorXcd& U0,
                                            const std::vector<double>& t_out,
                                            const IntegratorOptions& opt,
                                            IntegratorStats* stats) {
  const std::complex<double> I(0.0, 1.0);
  auto f = [&reduced, &xi, I](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    Eigen::MatrixXcd G = reduced.eval_A(t, xi).cast<std::complex<double>>();
    G += reduced.eval_L(t, xi);
    return I * (G * y);
  };
  return integrate_ode(f, U0, t_out, opt, stats);
}

namespace {

double rho_at(const WeightPlan& plan, double t) { return plan.rho0 - plan.kappa * t; }

}  // namespace

ScaledVector w_transform(const Eigen::VectorXcd& V, const RegularizedEigenField& reg,
                         const WeightPlan& plan, int it) {
  const SymmetrizerBlock blk = build_block(reg, it);
  const int m = reg.m();
  Eigen::VectorXcd w(V.size());
  for (int b = 0; b < m; ++b)
    w.segment(b * m, m) = blk.Hinv.cast<std::complex<double>>() * V.segment(b * m, m);
  ScaledVector out;
  const double nrm = w.norm();
  const double t = reg.t[static_cast<std::size_t>(it)];
  const double weight = rho_at(plan, t) * std::pow(reg.bracket, 1.0 / plan.s);
  if (nrm == 0.0) {
    out.v = w;
    out.log_scale = weight;
    return out;
  }
  out.v = (blk.det < 0.0 ? -1.0 : 1.0) / nrm * w;
  out.log_scale = weight + std::log(std::fabs(blk.det)) + std::log(nrm);
  return out;
}

ScaledVector w_inverse(const ScaledVector& W, const RegularizedEigenField& reg,
                       const WeightPlan& plan, int it) {
  const SymmetrizerBlock blk = build_block(reg, it);
  const int m = reg.m();
  Eigen::VectorXcd v(W.v.size());
  for (int b = 0; b < m; ++b)
    v.segment(b * m, m) = blk.H.cast<std::complex<double>>() * W.v.segment(b * m, m);
  ScaledVector out;
  const double t = reg.t[static_cast<std::size_t>(it)];
  const double weight = rho_at(plan, t) * std::pow(reg.bracket, 1.0 / plan.s);
  const double nrm = v.norm();
  if (nrm == 0.0) {
    out.v = v;
    out.log_scale = 0.0;
    return out;
  }
  out.v = (blk.det < 0.0 ? -1.0 : 1.0) / nrm * v;
  out.log_scale = W.log_scale - weight - std::log(std::fabs(blk.det)) + std::log(nrm);
  return out;
}

EnergyCheck check_energy(const std::vector<double>& log_norm_W, double tol) {
  if (log_norm_W.empty()) throw std::invalid_argument("check_energy: empty history");
  EnergyCheck ec;
  const double base = log_norm_W.front();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < log_norm_W.size(); ++i) {
    const double d = log_norm_W[i] - base;
    if (d > best) {
      best = d;
      ec.argmax_index = static_cast<int>(i);
    }
  }
  ec.max_ratio = std::exp(best);
  ec.pass = ec.max_ratio <= 1.0 + tol;
  return ec;
}

DecayFit fit_decay(const std::vector<double>& brackets, const std::vector<double>& radii,
                   const std::vector<double>& log_absV_final, double s, double Xi0,
                   bool with_log_term) {
  if (brackets.size() != radii.size() || brackets.size() != log_absV_final.size())
    throw std::invalid_argument("fit_decay: size mismatch");
  DecayFit fit;
  fit.s = s;
  fit.Xi0 = Xi0;
  const double floor_log = std::log(1e-300);
  std::vector<double> x, y, lx;
  bool any_in_range = false;
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    if (radii[i] < Xi0) continue;
    any_in_range = true;
    if (log_absV_final[i] <= floor_log) continue;  // numerically dead mode
    x.push_back(std::pow(brackets[i], 1.0 / s));
    lx.push_back(std::log(brackets[i]));
    y.push_back(-log_absV_final[i]);
  }
  if (any_in_range && x.empty()) {
    fit.fully_decayed = true;
    return fit;
  }
  const int cols = with_log_term ? 3 : 2;
  if (static_cast<int>(x.size()) < cols)
    throw std::invalid_argument("fit_decay: not enough usable samples above Xi0");
  fit.n_points = static_cast<int>(x.size());

  Eigen::MatrixXd X(fit.n_points, cols);
  Eigen::VectorXd Y(fit.n_points);
  for (int i = 0; i < fit.n_points; ++i) {
    X(i, 0) = x[static_cast<std::size_t>(i)];
    X(i, 1) = 1.0;
    if (with_log_term) X(i, 2) = lx[static_cast<std::size_t>(i)];
    Y[i] = y[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd beta = X.colPivHouseholderQr().solve(Y);
  fit.delta = beta[0];
  fit.intercept = beta[1];
  if (with_log_term) fit.log_poly_coeff = beta[2];
  const double ynorm = Y.norm();
  fit.residual = ynorm > 0.0 ? (X * beta - Y).norm() / ynorm : 0.0;
  return fit;
}

}  // namespace weakhyp
