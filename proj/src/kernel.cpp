#include "mhress/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mhress {

namespace {
constexpr double kClampTol = 1e-8;
}

MhKernel::MhKernel(Target target, Proposal proposal, QuadratureRule quadrature)
    : target_(std::move(target)), proposal_(std::move(proposal)), quadrature_(quadrature) {}

double MhKernel::t(double x, double u) const {
  return proposal_.symmetric() ? t_symmetric(x, u) : t_general(x, u);
}

double MhKernel::t_symmetric(double x, double u) const {
  if (std::abs(u) > proposal_.range()) return 0.0;
  const double delta = proposal_.shape(u);
  if (delta == 0.0) return 0.0;
  const double lr = log_ratio(target_, x, x + u);
  return lr >= 0.0 ? delta : delta * std::exp(lr);
}

double MhKernel::t_general(double x, double u) const {
  if (std::abs(u) > proposal_.range()) return 0.0;
  const double y = x + u;
  const double forward = proposal_.density(x, y);
  if (forward == 0.0) return 0.0;
  const double log_a = log_acceptance_ratio(x, y);
  return log_a >= 0.0 ? forward : forward * std::exp(log_a);
}

double MhKernel::log_acceptance_ratio(double x, double y) const {
  const double forward = proposal_.density(x, y);
  const double backward = proposal_.density(y, x);
  if (backward == 0.0) return -std::numeric_limits<double>::infinity();
  if (forward == 0.0) return std::numeric_limits<double>::infinity();
  double lr = log_ratio(target_, x, y);
  if (forward != backward) lr += std::log(backward) - std::log(forward);
  return lr;
}

std::vector<double> MhKernel::breakpoints(double x) const {
  std::vector<double> out = proposal_.kinks();
  for (double k : target_.kinks()) out.push_back(k - x);
  // Branch switch of the min for even unimodal targets: pi(x + u) = pi(x).
  if (target_.even_unimodal()) out.push_back(-2.0 * x);
  return out;
}

Rejection MhKernel::rejection(double x) const {
  const double s = proposal_.range();
  auto integrand = [this, x](double u) { return t(x, u); };
  const auto bps = breakpoints(x);
  const QuadResult q = integrate(integrand, -s, s, quadrature_, bps);
  Rejection r;
  r.raw = 1.0 - q.value;
  r.error = q.error;
  r.converged = q.converged;
  r.value = std::clamp(r.raw, 0.0, 1.0);
  r.clamped = r.raw < -kClampTol || r.raw > 1.0 + kClampTol;
  return r;
}

double MhKernel::detailed_balance_residual(double x, double y) const {
  const double txy = t(x, y - x);
  const double tyx = t(y, x - y);
  if (txy == 0.0 && tyx == 0.0) return 0.0;
  const double lx = target_.log_density(x);
  const double ly = target_.log_density(y);
  const double m = std::max(lx, ly);
  const double a = txy * std::exp(lx - m);
  const double b = tyx * std::exp(ly - m);
  const double denom = std::max({a, b, std::numeric_limits<double>::min()});
  return std::abs(a - b) / denom;
}

std::vector<double> MhKernel::check_accessibility(std::span<const double> grid) const {
  if (grid.empty()) throw std::invalid_argument("accessibility grid is empty");
  constexpr int kScan = 33;
  const double s = proposal_.range();
  std::vector<double> violations;
  for (double x : grid) {
    bool witness = false;
    for (int i = 0; i < kScan && !witness; ++i) {
      const double y = x - s + 2.0 * s * i / (kScan - 1);
      witness = proposal_.density(x, y) * proposal_.density(y, x) > 0.0;
    }
    if (!witness) violations.push_back(x);
  }
  return violations;
}

}  // namespace mhress
