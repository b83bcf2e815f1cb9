#include "mhress/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mhress/bounds.hpp"

namespace mhress {

namespace {

double log_tail_mass_ratio(const Target& target, double A) {
  // Everything relative to the largest log-density found on a probe grid.
  double ref = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) ref = std::max(ref, target.log_density(-A + 2.0 * A * i / 200));
  auto scaled = [&](double x) { return std::exp(target.log_density(x) - ref); };
  const AdaptiveSimpson rule{1e-14, 1e-12, 50};
  const auto kinks = target.kinks();
  const double bulk = integrate(scaled, -A, A, rule, kinks).value;
  const double width = std::max(A, 50.0);
  const double tail = integrate(scaled, A, A + width, rule).value +
                      integrate(scaled, -A - width, -A, rule).value;
  return tail / (bulk + tail);
}

}  // namespace

Discretization Discretization::uniform(const Target& target, double half_width, int n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("node count must be odd and at least 3");
  if (!(half_width > 0.0)) throw std::invalid_argument("domain half-width must be positive");
  Discretization d;
  d.half_width = half_width;
  d.n = n;
  d.nodes = Eigen::VectorXd::LinSpaced(n, -half_width, half_width);
  d.nodes((n - 1) / 2) = 0.0;
  const double h = d.spacing();
  d.weights = Eigen::VectorXd::Constant(n, h);
  d.weights(0) = d.weights(n - 1) = 0.5 * h;

  d.log_masses.resize(n);
  for (int i = 0; i < n; ++i) d.log_masses(i) = target.log_density(d.nodes(i)) + std::log(d.weights(i));
  const double top = d.log_masses.maxCoeff();
  const double lse = top + std::log((d.log_masses.array() - top).exp().sum());
  d.log_masses.array() -= lse;
  d.masses = d.log_masses.array().exp();
  d.masses /= d.masses.sum();
  d.truncation_defect = log_tail_mass_ratio(target, half_width);
  return d;
}

TransitionMatrix build_p_matrix(const MhKernel& kernel, const Discretization& d, DiagonalMode mode) {
  const double s = kernel.range();
  if (!(d.half_width > s)) throw std::invalid_argument("domain half-width A must exceed the proposal range s");
  const int n = d.n;
  const double h = d.spacing();
  const int band = static_cast<int>(std::floor(s / h + 1e-9));

  TransitionMatrix out;
  out.sub_kernel = Eigen::MatrixXd::Zero(n, n);
  out.holding.resize(n);
  out.under_resolved = h > s;
  // With no neighbour inside the proposal range a one-node rule cannot
  // resolve t, so the grid keeps every chain in place (M = I, flagged).
  for (int i = 0; i < n && !out.under_resolved; ++i) {
    const int lo = std::max(0, i - band);
    const int hi = std::min(n - 1, i + band);
    for (int j = lo; j <= hi; ++j) {
      out.sub_kernel(i, j) = kernel.t(d.nodes(i), d.nodes(j) - d.nodes(i)) * d.weights(j);
    }
  }
  const Eigen::VectorXd accepted = out.sub_kernel.rowwise().sum();
  for (int i = 0; i < n; ++i) {
    const bool boundary = std::abs(d.nodes(i)) > d.half_width - s;
    if (boundary) out.boundary_rows.push_back(i);
    const double r_quad = kernel.rejection_prob(d.nodes(i));
    out.holding(i) = (mode == DiagonalMode::kStochastic) ? 1.0 - accepted(i) : r_quad;
    if (!boundary) {
      out.max_rejection_mismatch = std::max(out.max_rejection_mismatch, std::abs(out.holding(i) - r_quad));
      out.max_interior_row_defect =
          std::max(out.max_interior_row_defect, std::abs(out.holding(i) + accepted(i) - 1.0));
    }
  }
  out.transition = out.sub_kernel;
  out.transition.diagonal() += out.holding;
  return out;
}

double relative_asymmetry(const Eigen::MatrixXd& s) {
  const double scale = s.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (s - s.transpose()).cwiseAbs().maxCoeff() / scale;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m, const Discretization& d, double tol) {
  if (m.rows() != d.n || m.cols() != d.n) throw std::invalid_argument("matrix size does not match the grid");
  if ((d.masses.array() <= 0.0).any()) throw std::invalid_argument("symmetrization needs positive masses");
  const Eigen::ArrayXd half = 0.5 * d.log_masses.array();
  Eigen::MatrixXd s(d.n, d.n);
  for (int j = 0; j < d.n; ++j) {
    s.col(j) = ((half - half(j)).exp() * m.col(j).array()).matrix();
  }
  const double asym = relative_asymmetry(s);
  if (asym > tol) {
    throw NumericalError("AsymmetryExceeded: relative asymmetry " + std::to_string(asym) +
                         " after symmetrization; the kernel violates detailed balance");
  }
  return s;
}

std::vector<double> eigenvalues_symmetric(const Eigen::MatrixXd& s) {
  const JacobiEigenSolver<double> solver(s);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Eigen::MatrixXd tail_sub_kernel(const TransitionMatrix& p, const Discretization& d, double a) {
  if (!(a > 0.0) || !(a < d.half_width)) throw std::invalid_argument("need 0 < a < A");
  Eigen::MatrixXd t = p.sub_kernel;
  for (int i = 0; i < d.n; ++i) {
    if (std::abs(d.nodes(i)) <= a) t.row(i).setZero();
  }
  // Masked rows break the symmetry, so no asymmetry check here.
  return symmetrize(t, d, std::numeric_limits<double>::infinity());
}

double norm_T_ac(const TransitionMatrix& p, const Discretization& d, double a, int iterations) {
  return largest_singular_value(tail_sub_kernel(p, d, a), iterations).value;
}

double norm_T_ac(const MhKernel& kernel, const Discretization& d, double a, int iterations) {
  if (!(a > 0.0) || !(a < d.half_width)) throw std::invalid_argument("need 0 < a < A");
  return norm_T_ac(build_p_matrix(kernel, d), d, a, iterations);
}

double hs_norm_T_a(const MhKernel& kernel, double a, double half_width, const GaussLegendre& rule) {
  if (!(a > 0.0) || !(a < half_width)) throw std::invalid_argument("need 0 < a < A");
  const double s = kernel.range();
  const Target& target = kernel.target();
  std::vector<double> x_bps = target.kinks();
  x_bps.push_back(0.0);
  std::vector<double> u_bps = kernel.proposal().kinks();

  auto inner = [&](double x) {
    auto f = [&](double u) {
      const double y = x + u;
      if (std::abs(y) > half_width) return 0.0;
      const double t = kernel.t(y, -u);
      if (t == 0.0) return 0.0;
      return t * t * std::exp(log_ratio(target, x, y));
    };
    // Kinks of u -> t(x + u, x): proposal kinks, target kinks and the
    // branch switch pi(x + u) = pi(x).
    std::vector<double> bps = u_bps;
    for (double k : target.kinks()) bps.push_back(k - x);
    if (target.even_unimodal()) bps.push_back(-2.0 * x);
    bps.push_back(half_width - x);
    bps.push_back(-half_width - x);
    return integrate(f, -s, s, rule, bps).value;
  };
  const double sq = integrate(inner, -a, a, rule, x_bps).value;
  return std::sqrt(std::max(sq, 0.0));
}

double weighted_operator_norm(const Eigen::MatrixXd& m, const Discretization& d) {
  const Eigen::MatrixXd s = symmetrize(m, d, std::numeric_limits<double>::infinity());
  const Eigen::MatrixXd gram = s.transpose() * s;
  const JacobiEigenSolver<double> solver(gram);
  return std::sqrt(std::max(solver.eigenvalues()(0), 0.0));
}

DecompositionCheck decomposition_residual(const TransitionMatrix& p, const Discretization& d,
                                          double a, int n_power, double alpha_a) {
  if (n_power < 1 || n_power > 8) throw std::invalid_argument("n_power must be in [1, 8]");
  if (!(a > 0.0) || !(a < d.half_width)) throw std::invalid_argument("need 0 < a < A");
  const int n = d.n;
  Eigen::VectorXd core = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd outer = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd tail_t = p.sub_kernel;
  for (int i = 0; i < n; ++i) {
    if (std::abs(d.nodes(i)) <= a) {
      core(i) = p.holding(i);
      tail_t.row(i).setZero();
    } else {
      outer(i) = p.holding(i);
    }
  }
  Eigen::MatrixXd tail_op = tail_t;  // R_{a^c} + T_{a^c}
  tail_op.diagonal() += outer;

  DecompositionCheck out;
  out.alpha_a = alpha_a;
  out.residual = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd p_pow = p.transition;
  Eigen::VectorXd core_pow = core;
  Eigen::MatrixXd tail_pow = tail_op;
  for (int k = 1; k <= n_power; ++k) {
    if (k > 1) {
      p_pow = p_pow * p.transition;
      core_pow = core_pow.cwiseProduct(core);
      tail_pow = tail_pow * tail_op;
    }
    Eigen::MatrixXd compact = p_pow - tail_pow;  // K_n
    compact.diagonal() -= core_pow;
    const double norm = weighted_operator_norm(p_pow - compact, d);
    const double bound = 2.0 * std::pow(alpha_a, k);
    out.norms.push_back(norm);
    out.bounds.push_back(bound);
    out.residual = std::max(out.residual, norm - bound);
  }
  return out;
}

DecompositionCheck decomposition_residual(const MhKernel& kernel, const Discretization& d, double a,
                                          int n_power) {
  const TailModel tails = make_tail_model(kernel.target(), kernel.range());
  const double alpha_a = alpha(kernel, a, default_x_max(kernel, a), tails).alpha_a;
  return decomposition_residual(build_p_matrix(kernel, d), d, a, n_power, alpha_a);
}

SpectralReport spectral_report(const MhKernel& kernel, const Discretization& d, double a,
                               double beta_a, double alpha_a) {
  SpectralReport rep;
  rep.half_width = d.half_width;
  rep.n = d.n;
  rep.a = a;
  rep.beta_a = beta_a;
  rep.alpha_a = alpha_a;
  rep.truncation_defect = d.truncation_defect;

  const TransitionMatrix p = build_p_matrix(kernel, d);
  rep.max_interior_row_defect = p.max_interior_row_defect;
  const Eigen::MatrixXd s = symmetrize(p.transition, d);
  rep.asymmetry = relative_asymmetry(s);
  const JacobiEigenSolver<double> solver(0.5 * (s + s.transpose()));
  rep.jacobi_sweeps = solver.sweeps();
  const auto& ev = solver.eigenvalues();
  rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  rep.top_eigenvalue = ev(0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i) - 1.0) <= 5e-4) ++rep.eigenvalues_near_one;
    if (i > 0) rep.second_modulus = std::max(rep.second_modulus, std::abs(ev(i)));
  }
  rep.norm_T_ac = norm_T_ac(p, d, a);
  rep.norm_within_beta = rep.norm_T_ac <= beta_a + 0.01;
  rep.hs_norm_T_a = hs_norm_T_a(kernel, a, d.half_width);
  return rep;
}

}  // namespace mhress
