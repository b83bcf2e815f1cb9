#pragma once

// Truncated constants and the essential-spectral-radius bound
//
//   r_a    = sup_{|x| <= a} r(x)
//   r'_a   = sup_{|x| >  a} r(x)
//   beta_a = int_{-s}^{s} sup_{|x| > a} sqrt(t(x, x+u) t(x+u, x)) du
//   alpha_a = max(r_a, r'_a + beta_a)
//
// The tail suprema run over the finite window a < |x| <= x_max and are merged
// with the tail-ratio asymptote when one is available. Without an asymptote
// the window must look flat near its outer edge, otherwise the result is only
// a lower estimate of the supremum and is flagged as not a valid bound.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mhress/asymptotics.hpp"
#include "mhress/kernel.hpp"
#include "mhress/quadrature.hpp"

namespace mhress {

struct BoundOptions {
  SupScan scan{};
  AdaptiveSimpson outer{1e-10, 1e-10, 40};
  /// Integrate 2 * int_0^s instead of int_{-s}^s; valid for even targets
  /// with symmetric proposals only.
  bool even_shortcut = false;
};

double default_x_max(const MhKernel& kernel, double a);
std::vector<double> default_a_list(double s);

struct CompactSup {
  double value = 0.0;
  double argmax = 0.0;
  double error = 0.0;
  bool converged = true;
};

CompactSup r_sup_compact(const MhKernel& kernel, double a, const SupScan& scan = {});

struct TailSup {
  double value = 0.0;
  double window_max = 0.0;
  double argmax = 0.0;
  double asymptote = 0.0;
  bool has_asymptote = false;
  double error = 0.0;
  bool converged = true;
  bool tail_resolved = true;
};

TailSup r_sup_tail(const MhKernel& kernel, double a, double x_max, const TailModel& tails,
                   const SupScan& scan = {});

/// sqrt(t(x, x+u) t(x+u, x)); computed as Delta(u) exp(-|log ratio| / 2) for
/// symmetric proposals.
double beta_integrand(const MhKernel& kernel, double x, double u);

struct BetaValue {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  bool tail_resolved = true;
};

BetaValue beta(const MhKernel& kernel, double a, double x_max, const TailModel& tails,
               const BoundOptions& opts = {});

struct BoundReport {
  double a = 0.0;
  double x_max = 0.0;
  double r_a = 0.0;
  double r_prime_a = 0.0;
  double beta_a = 0.0;
  double alpha_a = 0.0;
  double r_a_argmax = 0.0;
  double r_prime_argmax = 0.0;
  bool r_a_converged = true;
  bool r_prime_converged = true;
  bool beta_converged = true;
  bool tail_resolved = true;
  double r_a_error = 0.0;
  double r_prime_error = 0.0;
  double beta_error = 0.0;
  double alpha_error = 0.0;
  std::vector<std::string> warnings;

  bool converged() const {
    return r_a_converged && r_prime_converged && beta_converged && tail_resolved;
  }
  bool certified() const { return converged() && alpha_a < 1.0; }
  std::string verdict() const;
};

BoundReport alpha(const MhKernel& kernel, double a, double x_max, const TailModel& tails,
                  const BoundOptions& opts = {});

struct BoundProfile {
  std::vector<BoundReport> reports;
  std::size_t best = 0;  // index of the smallest alpha_a

  const BoundReport& best_report() const { return reports.at(best); }
};

/// One report per radius; radii must be positive and strictly increasing and
/// all share the same window x_max. Radii are computed concurrently.
BoundProfile bound_profile(const MhKernel& kernel, std::span<const double> a_list, double x_max,
                           const TailModel& tails, const BoundOptions& opts = {});

}  // namespace mhress
