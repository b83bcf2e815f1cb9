#pragma once

// The Metropolis-Hastings sub-kernel t(x, y) = min(q(x,y), pi(y) q(y,x) / pi(x))
// and the rejection probability r(x) = 1 - int t(x, y) dy.

#include <span>
#include <vector>

#include "mhress/model.hpp"
#include "mhress/quadrature.hpp"

namespace mhress {

struct Rejection {
  double value = 0.0;   // clamped to [0, 1]
  double raw = 0.0;     // 1 - quadrature, before clamping
  double error = 0.0;   // quadrature error estimate
  bool converged = true;
  bool clamped = false; // raw left [-tol, 1 + tol]
};

class MhKernel {
 public:
  MhKernel(Target target, Proposal proposal, QuadratureRule quadrature = AdaptiveSimpson{});

  const Target& target() const { return target_; }
  const Proposal& proposal() const { return proposal_; }
  const QuadratureRule& quadrature() const { return quadrature_; }
  double range() const { return proposal_.range(); }

  /// t(x, x + u). Zero for |u| > s without touching pi. Dispatches to the
  /// symmetric shortcut when the proposal is even.
  double t(double x, double u) const;
  double t_symmetric(double x, double u) const;
  double t_general(double x, double u) const;

  /// Log of the acceptance ratio pi(y) q(y,x) / (pi(x) q(x,y)); -inf when
  /// the reverse move is impossible.
  double log_acceptance_ratio(double x, double y) const;

  Rejection rejection(double x) const;
  double rejection_prob(double x) const { return rejection(x).value; }

  /// |t(x,y) pi(x) - t(y,x) pi(y)| / max(t(x,y) pi(x), t(y,x) pi(y), eps),
  /// evaluated relative to max(pi(x), pi(y)) so far tails do not underflow.
  double detailed_balance_residual(double x, double y) const;

  /// Grid points x with no y in [x - s, x + s] (33-point scan) such that
  /// q(x, y) q(y, x) > 0.
  std::vector<double> check_accessibility(std::span<const double> grid) const;

  /// Quadrature breakpoints in u for the integral of u -> t(x, x + u).
  std::vector<double> breakpoints(double x) const;

 private:
  Target target_;
  Proposal proposal_;
  QuadratureRule quadrature_;
};

}  // namespace mhress
