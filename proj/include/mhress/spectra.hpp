#pragma once

// Nystrom discretization of the Metropolis-Hastings operator P = R + T on a
// truncated uniform grid, and discrete checks of the operator inequalities
// behind the essential-spectral-radius bound.
//
// All spectral outputs are heuristic: they discretize a non-compact operator
// and say nothing certified about its point spectrum.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "mhress/jacobi.hpp"
#include "mhress/kernel.hpp"

namespace mhress {

inline constexpr const char* kSpectralCaveat =
    "heuristic - discretization of a non-compact operator; discrete eigenvalues are not "
    "certified approximations of the point spectrum";

/// Uniform nodes on [-A, A] with trapezoid weights and normalized masses
/// m_i = pi(x_i) w_i / sum_j pi(x_j) w_j.
struct Discretization {
  double half_width = 0.0;
  int n = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::VectorXd log_masses;
  Eigen::VectorXd masses;
  double truncation_defect = 0.0;  // target mass outside [-A, A]

  static Discretization uniform(const Target& target, double half_width, int n);

  double spacing() const { return 2.0 * half_width / (n - 1); }
  bool valid() const { return truncation_defect < 1e-6; }
};

enum class DiagonalMode {
  kStochastic,  // R_ii = 1 - sum_j t(x_i, x_j) w_j: rows sum to one
  kQuadrature,  // R_ii = r(x_i) from the adaptive quadrature of the kernel
};

struct TransitionMatrix {
  Eigen::MatrixXd transition;  // P = diag(holding) + T
  Eigen::MatrixXd sub_kernel;  // T_ij = t(x_i, x_j) w_j
  Eigen::VectorXd holding;     // discrete R
  std::vector<int> boundary_rows;       // rows whose proposal support leaves [-A, A]
  double max_interior_row_defect = 0.0; // max |row sum - 1| over interior rows
  double max_rejection_mismatch = 0.0;  // max |holding_i - r(x_i)| over interior rows
  bool under_resolved = false;          // grid spacing exceeds the proposal range
};

TransitionMatrix build_p_matrix(const MhKernel& kernel, const Discretization& d,
                                DiagonalMode mode = DiagonalMode::kStochastic);

/// S = D^{1/2} M D^{-1/2} with D = diag(m). Reversibility makes S symmetric;
/// throws NumericalError when max |S_ij - S_ji| > tol * max |S|.
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m, const Discretization& d, double tol = 1e-9);

/// Max |S_ij - S_ji| / max |S|.
double relative_asymmetry(const Eigen::MatrixXd& s);

/// Full spectrum, sorted descending, by cyclic Jacobi.
std::vector<double> eigenvalues_symmetric(const Eigen::MatrixXd& s);

/// Discrete T_{a^c}: T with rows |x_i| <= a zeroed, in symmetrized coordinates.
Eigen::MatrixXd tail_sub_kernel(const TransitionMatrix& p, const Discretization& d, double a);

/// Largest singular value of the symmetrized discrete T_{a^c} (200 power
/// iterations on the Gram matrix by default).
double norm_T_ac(const MhKernel& kernel, const Discretization& d, double a, int iterations = 200);
double norm_T_ac(const TransitionMatrix& p, const Discretization& d, double a, int iterations = 200);

/// Hilbert-Schmidt norm of T_a on L^2(pi):
/// sqrt( int_{|x|<=a} int_{|y|<=A} t(y, x)^2 pi(y) / pi(x) dy dx ),
/// by tensor-product composite Gauss-Legendre in (x, u = y - x).
double hs_norm_T_a(const MhKernel& kernel, double a, double half_width,
                   const GaussLegendre& rule = {});

struct DecompositionCheck {
  std::vector<double> norms;   // ||P^n - K_n|| in L^2(m), n = 1..n_power
  std::vector<double> bounds;  // 2 alpha_a^n
  double residual = 0.0;       // max_n (norms[n] - bounds[n])
  double alpha_a = 0.0;
};

/// Forms K_n = P^n - R_a^n - (R_{a^c} + T_{a^c})^n and checks
/// ||P^n - K_n|| <= 2 alpha_a^n for n = 1..n_power (1 <= n_power <= 8).
DecompositionCheck decomposition_residual(const TransitionMatrix& p, const Discretization& d,
                                          double a, int n_power, double alpha_a);
/// Same, computing alpha_a with the bound module (default window).
DecompositionCheck decomposition_residual(const MhKernel& kernel, const Discretization& d, double a,
                                          int n_power);

/// Spectral 2-norm in L^2(m) coordinates of an operator given in the original
/// (row-stochastic) coordinates.
double weighted_operator_norm(const Eigen::MatrixXd& m, const Discretization& d);

struct SpectralReport {
  double half_width = 0.0;
  int n = 0;
  double a = 0.0;
  std::vector<double> eigenvalues;  // descending
  double top_eigenvalue = 0.0;
  double second_modulus = 0.0;      // heuristic rho_2 estimate, uncertified
  int eigenvalues_near_one = 0;     // within 5e-4 of 1
  double norm_T_ac = 0.0;
  double beta_a = 0.0;
  bool norm_within_beta = false;    // norm_T_ac <= beta_a + 0.01
  double hs_norm_T_a = 0.0;
  double alpha_a = 0.0;
  double truncation_defect = 0.0;
  double max_interior_row_defect = 0.0;
  double asymmetry = 0.0;
  int jacobi_sweeps = 0;
  std::string caveat = kSpectralCaveat;
};

SpectralReport spectral_report(const MhKernel& kernel, const Discretization& d, double a,
                               double beta_a, double alpha_a);

}  // namespace mhress
