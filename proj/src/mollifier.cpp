#include "weakhyp/mollifier.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace weakhyp {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev initial guess, Newton on P_n
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

namespace {

double bump_raw(double x) {
  double d = 1.0 - x * x;
  return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
}

double bump_raw_deriv(double x) {
  double d = 1.0 - x * x;
  if (d <= 0.0) return 0.0;
  return bump_raw(x) * (-2.0 * x / (d * d));
}

// Symmetric composite rule on [-1, 1]: nodes of the left half mirrored onto
// the right so odd moments cancel exactly.
void composite_rule(int points_per_cell, int cells, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  std::vector<double> gn, gw;
  gauss_legendre(points_per_cell, gn, gw);
  nodes.clear();
  weights.clear();
  const double h = 2.0 / cells;
  for (int c = 0; c < cells; ++c) {
    double a = -1.0 + c * h;
    for (int q = 0; q < points_per_cell; ++q) {
      nodes.push_back(a + 0.5 * h * (gn[static_cast<std::size_t>(q)] + 1.0));
      weights.push_back(0.5 * h * gw[static_cast<std::size_t>(q)]);
    }
  }
  // enforce exact mirror symmetry
  const std::size_t n = nodes.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    nodes[n - 1 - i] = -nodes[i];
    weights[n - 1 - i] = weights[i];
  }
}

}  // namespace

MollifierSpec MollifierSpec::canonical(int points_per_cell, int cells) {
  MollifierSpec mol;
  composite_rule(points_per_cell, cells, mol.nodes_, mol.wphi_);
  double raw = 0.0;
  for (std::size_t q = 0; q < mol.nodes_.size(); ++q) raw += mol.wphi_[q] * bump_raw(mol.nodes_[q]);
  mol.norm_c_ = 1.0 / raw;
  mol.wdphi_.resize(mol.nodes_.size());
  for (std::size_t q = 0; q < mol.nodes_.size(); ++q) {
    double w = mol.wphi_[q];
    mol.wphi_[q] = w * mol.norm_c_ * bump_raw(mol.nodes_[q]);
    mol.wdphi_[q] = w * mol.norm_c_ * bump_raw_deriv(mol.nodes_[q]);
  }
  return mol;
}

double MollifierSpec::mass() const {
  double s = 0.0;
  for (double w : wphi_) s += w;
  return s;
}

double MollifierSpec::mass_independent(int points_per_cell, int cells) const {
  std::vector<double> n, w;
  composite_rule(points_per_cell, cells, n, w);
  double s = 0.0;
  for (std::size_t q = 0; q < n.size(); ++q) s += w[q] * norm_c_ * bump_raw(n[q]);
  return s;
}

double MollifierSpec::phi(double x) const { return norm_c_ * bump_raw(x); }

namespace {

// lambda_j(s) with linear interpolation on the grid, constant beyond [0, T].
double sample(const EigenField& f, int j, double s) {
  if (s <= f.t.front()) return f.lambda(0, j);
  if (s >= f.t.back()) return f.lambda(f.nt() - 1, j);
  const double h = f.dt();
  const double pos = (s - f.t.front()) / h;
  int i = static_cast<int>(pos);
  if (i >= f.nt() - 1) i = f.nt() - 2;
  const double w = pos - i;
  return (1.0 - w) * f.lambda(i, j) + w * f.lambda(i + 1, j);
}

}  // namespace

RegularizedEigenField mollify(const EigenField& field, const MollifierSpec& mol, double eps,
                              double alpha) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollify: eps must be > 0");
  if (field.nt() >= 2 && eps < 4.0 * field.dt())
    throw std::invalid_argument("mollify: eps below 4 grid spacings (under-resolved mollifier)");

  RegularizedEigenField reg;
  reg.t = field.t;
  reg.eps = eps;
  reg.alpha = alpha;
  reg.bracket = field.bracket;
  reg.xi_norm = field.xi_norm;
  const int m = field.m(), nt = field.nt();
  reg.lam_eps.resize(nt, m);
  reg.dlam_eps.resize(nt, m);

  const double sep = std::pow(eps, alpha) * field.bracket;
  const auto& u = mol.nodes();
  const auto& wphi = mol.wphi();
  const auto& wdphi = mol.wdphi();
  const std::size_t nq = u.size();

  for (int j = 0; j < m; ++j) {
    for (int it = 0; it < nt; ++it) {
      const double t = field.t[static_cast<std::size_t>(it)];
      // (lambda * phi_eps)(t) = int lambda(t - eps u) phi(u) du; symmetric
      // pairwise summation keeps odd moments at exact zero.
      double conv = 0.0, dconv = 0.0;
      for (std::size_t q = 0; q < nq / 2; ++q) {
        const std::size_t qm = nq - 1 - q;
        const double lm = sample(field, j, t - eps * u[qm]);
        const double lp = sample(field, j, t - eps * u[q]);
        conv += wphi[q] * (lp + lm);
        dconv += wdphi[q] * lp + wdphi[qm] * lm;
      }
      if (nq % 2 == 1) {
        const std::size_t mid = nq / 2;
        conv += wphi[mid] * sample(field, j, t - eps * u[mid]);
        dconv += wdphi[mid] * sample(field, j, t - eps * u[mid]);
      }
      reg.lam_eps(it, j) = conv + (j + 1) * sep;
      reg.dlam_eps(it, j) = dconv / eps;
    }
  }
  return reg;
}

RegularizationConstants verify_regularized_bounds(const RegularizedEigenField& reg,
                                                  const EigenField& field, double t_max) {
  RegularizationConstants out;
  const int m = reg.m(), nt = reg.nt();
  const double sep = std::pow(reg.eps, reg.alpha) * reg.bracket;
  const double dscale = std::pow(reg.eps, reg.alpha - 1.0) * reg.bracket;
  out.worst_separation_margin = std::numeric_limits<double>::infinity();
  for (int it = 0; it < nt; ++it) {
    if (reg.t[static_cast<std::size_t>(it)] > t_max) break;
    for (int j = 0; j < m; ++j) {
      out.c_i = std::max(out.c_i, std::fabs(reg.dlam_eps(it, j)) / dscale);
      out.c_ii =
          std::max(out.c_ii, std::fabs(reg.lam_eps(it, j) - field.lambda(it, j)) / sep);
      for (int i = 0; i < j; ++i) {
        const double margin = (reg.lam_eps(it, j) - reg.lam_eps(it, i)) - sep;
        out.worst_separation_margin = std::min(out.worst_separation_margin, margin);
      }
    }
  }
  if (m < 2) out.worst_separation_margin = 0.0;
  // tiny negative rounding residue still counts as holding with equality
  out.separation_ok = out.worst_separation_margin >= -1e-9 * sep;
  return out;
}

}  // namespace weakhyp
