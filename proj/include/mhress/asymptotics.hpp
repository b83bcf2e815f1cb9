#pragma once

// Limits of the truncated constants as the truncation radius a grows, for
// even targets with an existing tail ratio tau(u) = lim pi(x + u) / pi(x):
//
//   r'_inf    = 1 - int_0^s Delta(u) (1 + tau(u)) du
//   beta_inf  = 2 int_0^s Delta(u) sqrt(tau(u)) du
//   gamma_inf = 1 - int_0^s Delta(u) (1 - sqrt(tau(u)))^2 du = r'_inf + beta_inf
//   alpha_inf = max(sup_x r(x), gamma_inf)

#include <string>
#include <utility>
#include <vector>

#include "mhress/kernel.hpp"
#include "mhress/model.hpp"

namespace mhress {

struct TauEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Follows pi(x_k + u) / pi(x_k) along x_k = x0 growth^k (x_k -> -inf and
/// u -> -u when `left_tail`, i.e. the ratio of the mirrored density).
/// Converged once three successive ratios agree within 1e-6.
TauEstimate tau_numeric(const Target& target, double u, double x0 = 10.0, double growth = 1.5,
                        int max_iters = 60, bool left_tail = false);

/// Tail ratio for the right tail (or the mirrored left tail), closed form for
/// the built-in families and numeric otherwise. Unavailable if the numeric
/// limit fails to settle on a 33-point probe of [0, s].
TailRatio make_tail_ratio(const Target& target, double s, bool left_tail = false);

/// Both tails; the asymptote feeds the windowed suprema in the bound module.
struct TailModel {
  TailRatio right;
  TailRatio left;
  bool available() const { return right.available() && left.available(); }
};

TailModel make_tail_model(const Target& target, double s);

double gamma_inf(const Proposal& proposal, const TailRatio& tau);
double r_prime_inf(const Proposal& proposal, const TailRatio& tau);
double beta_inf(const Proposal& proposal, const TailRatio& tau);

struct AsymptoticReport {
  std::vector<std::pair<double, double>> tau_samples;  // (u, tau(u)) on [0, s]
  TailRatio::Mode tau_mode = TailRatio::Mode::kUnavailable;
  double x_max = 0.0;
  double r_compact = 0.0;          // sup of r over [-x_max, x_max]
  double r_compact_argmax = 0.0;
  double r_inf = 0.0;              // max(r_compact, r'_inf)
  double r_prime_inf = 0.0;
  double beta_inf = 0.0;
  double gamma_inf = 0.0;
  double alpha_inf = 0.0;
  double identity_residual = 0.0;  // |r'_inf + beta_inf - gamma_inf|
  bool degenerate = false;         // {u : tau(u) != 1} numerically negligible
  bool even_verified = false;
  bool positive_inside = true;     // Delta > 0 on (-s, s)
  bool scan_converged = true;
  std::vector<std::string> warnings;

  bool hypotheses_verified() const { return even_verified && positive_inside; }
  bool certified() const { return !degenerate && alpha_inf < 1.0 && scan_converged; }
  std::string verdict() const;
};

/// Assembles the asymptotic report. Requires a symmetric proposal and an
/// available tau; evenness of the target is checked on a grid and reported.
AsymptoticReport alpha_inf(const MhKernel& kernel, const TailRatio& tau, double x_max,
                           const SupScan& scan = {});

}  // namespace mhress
