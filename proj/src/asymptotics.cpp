#include "mhress/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "mhress/bounds.hpp"
#include "mhress/errors.hpp"

namespace mhress {

namespace {

constexpr double kTauAgreement = 1e-6;
constexpr double kDegenerateTol = 1e-9;
constexpr int kTauSamples = 33;

// Open rule: never evaluates the integrand at u = 0, where tau may jump
// (Gauss: tau(0) = 1, tau(0+) = 0).
const QuadratureRule kClosedFormRule = GaussLegendre{16, 128};

void require_tail_hypotheses(const Proposal& proposal, const TailRatio& tau) {
  if (!proposal.symmetric()) {
    throw HypothesisError("tail-ratio limits require a symmetric proposal");
  }
  if (!tau.available()) throw HypothesisError("tail ratio tau is unavailable for this target");
}

template <class F>
double integrate_0_s(const Proposal& proposal, const TailRatio& tau, F&& f) {
  std::vector<double> bps = proposal.kinks();
  bps.insert(bps.end(), tau.breakpoints.begin(), tau.breakpoints.end());
  return integrate(f, 0.0, proposal.range(), kClosedFormRule, bps).value;
}

}  // namespace

TauEstimate tau_numeric(const Target& target, double u, double x0, double growth,
                        int max_iters, bool left_tail) {
  TauEstimate out;
  if (u == 0.0) {
    out.value = 1.0;
    out.converged = true;
    return out;
  }
  const double sign = left_tail ? -1.0 : 1.0;
  double prev[2] = {-1.0, -1.0};
  double x = x0;
  for (int k = 0; k < max_iters; ++k, x *= growth) {
    const double lr = target.log_density(sign * (x + u)) - target.log_density(sign * x);
    const double ratio = std::exp(lr);
    out.value = ratio;
    out.iterations = k + 1;
    if (k >= 2 && std::abs(ratio - prev[1]) <= kTauAgreement &&
        std::abs(prev[1] - prev[0]) <= kTauAgreement) {
      out.converged = true;
      break;
    }
    prev[0] = prev[1];
    prev[1] = ratio;
  }
  out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

TailRatio make_tail_ratio(const Target& target, double s, bool left_tail) {
  if (target.is_builtin()) return TailRatio::closed_form(target);
  for (int i = 0; i < kTauSamples; ++i) {
    const double u = s * i / (kTauSamples - 1);
    if (!tau_numeric(target, u, 10.0, 1.5, 60, left_tail).converged) {
      return TailRatio::unavailable();
    }
  }
  return TailRatio::from_function(
      [target, left_tail](double u) { return tau_numeric(target, u, 10.0, 1.5, 60, left_tail).value; });
}

TailModel make_tail_model(const Target& target, double s) {
  return {make_tail_ratio(target, s, false), make_tail_ratio(target, s, true)};
}

double gamma_inf(const Proposal& proposal, const TailRatio& tau) {
  require_tail_hypotheses(proposal, tau);
  const double defect = integrate_0_s(proposal, tau, [&](double u) {
    const double d = 1.0 - std::sqrt(tau(u));
    return proposal.shape(u) * d * d;
  });
  return 1.0 - defect;
}

double r_prime_inf(const Proposal& proposal, const TailRatio& tau) {
  require_tail_hypotheses(proposal, tau);
  const double accepted = integrate_0_s(
      proposal, tau, [&](double u) { return proposal.shape(u) * (1.0 + tau(u)); });
  const double value = 1.0 - accepted;
  if (value > 0.5 + 1e-9) {
    throw NumericalError("r'_inf = " + std::to_string(value) + " exceeds 1/2");
  }
  return value;
}

double beta_inf(const Proposal& proposal, const TailRatio& tau) {
  require_tail_hypotheses(proposal, tau);
  return 2.0 * integrate_0_s(
                   proposal, tau, [&](double u) { return proposal.shape(u) * std::sqrt(tau(u)); });
}

std::string AsymptoticReport::verdict() const {
  if (degenerate) return "no certification: tail ratio is degenerate (tau = 1 almost everywhere)";
  if (!scan_converged) return "no certification: supremum scan did not converge";
  if (alpha_inf >= 1.0) return "no certification";
  std::string v = "quasi-compact certified at level alpha_inf = " + std::to_string(alpha_inf);
  if (!hypotheses_verified()) v += " (tail-bound hypotheses unverified)";
  return v;
}

AsymptoticReport alpha_inf(const MhKernel& kernel, const TailRatio& tau, double x_max,
                           const SupScan& scan) {
  const Proposal& proposal = kernel.proposal();
  require_tail_hypotheses(proposal, tau);
  if (!(x_max > 0.0)) throw std::invalid_argument("x_max must be positive");

  AsymptoticReport rep;
  rep.tau_mode = tau.mode;
  rep.x_max = x_max;
  const double s = proposal.range();
  for (int i = 0; i < kTauSamples; ++i) {
    const double u = s * i / (kTauSamples - 1);
    rep.tau_samples.emplace_back(u, tau(u));
  }

  rep.r_prime_inf = r_prime_inf(proposal, tau);
  rep.beta_inf = beta_inf(proposal, tau);
  rep.gamma_inf = gamma_inf(proposal, tau);
  rep.identity_residual = std::abs(rep.r_prime_inf + rep.beta_inf - rep.gamma_inf);
  rep.degenerate = rep.gamma_inf >= 1.0 - kDegenerateTol;
  if (rep.degenerate) {
    rep.warnings.push_back("DegenerateTau: gamma_inf = 1 within 1e-9; {u : tau(u) != 1} is negligible");
  }

  const CompactSup compact = r_sup_compact(kernel, x_max, scan);
  rep.r_compact = compact.value;
  rep.r_compact_argmax = compact.argmax;
  rep.scan_converged = compact.converged;
  rep.r_inf = std::max(compact.value, rep.r_prime_inf);
  rep.alpha_inf = std::max(rep.r_inf, rep.gamma_inf);

  rep.even_verified = true;
  const Target& target = kernel.target();
  constexpr int kEvenProbes = 201;
  for (int i = 0; i < kEvenProbes; ++i) {
    const double x = x_max * i / (kEvenProbes - 1);
    if (std::abs(target.log_density(x) - target.log_density(-x)) > 1e-9) {
      rep.even_verified = false;
      rep.warnings.push_back("target is not even (checked at x = " + std::to_string(x) +
                             "); tail-bound hypotheses unverified");
      break;
    }
  }
  rep.positive_inside = proposal.positive_inside();
  if (!rep.positive_inside) {
    rep.warnings.push_back("proposal shape is not positive on (-s, s); tail-bound hypotheses unverified");
  }
  return rep;
}

}  // namespace mhress
