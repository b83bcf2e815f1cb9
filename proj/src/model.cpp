#include "mhress/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mhress/errors.hpp"

namespace mhress {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + " must be a positive finite number");
  }
}

}  // namespace

Target Target::laplace(double scale) {
  require_positive(scale, "target scale");
  return Target(TargetFamily::kLaplace, scale, std::nullopt);
}

Target Target::gauss(double scale) {
  require_positive(scale, "target scale");
  return Target(TargetFamily::kGauss, scale, std::nullopt);
}

Target Target::from_expr(expr::Expr density) {
  if (density.variable() != "x") throw ConfigError("target expression must use the variable x");
  return Target(TargetFamily::kExpr, 1.0, std::move(density));
}

std::string Target::name() const {
  switch (family_) {
    case TargetFamily::kLaplace: return "laplace";
    case TargetFamily::kGauss: return "gauss";
    case TargetFamily::kExpr: return "expr";
  }
  return "?";
}

double Target::log_density(double x) const {
  switch (family_) {
    case TargetFamily::kLaplace:
      return -std::abs(x) / scale_ - std::log(2.0 * scale_);
    case TargetFamily::kGauss: {
      const double z = x / scale_;
      return -0.5 * z * z - std::log(scale_ * std::sqrt(2.0 * std::numbers::pi));
    }
    case TargetFamily::kExpr:
      return expr_->eval_log(x);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double Target::density(double x) const {
  switch (family_) {
    case TargetFamily::kLaplace:
      return std::exp(-std::abs(x) / scale_) / (2.0 * scale_);
    case TargetFamily::kGauss: {
      const double z = x / scale_;
      return std::exp(-0.5 * z * z) / (scale_ * std::sqrt(2.0 * std::numbers::pi));
    }
    case TargetFamily::kExpr: {
      const double v = expr_->eval(x);
      if (!(v > 0.0)) throw DomainError("pi", x);
      return v;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> Target::kinks() const {
  if (family_ == TargetFamily::kLaplace) return {0.0};
  return {};
}

std::optional<double> Target::cdf(double x) const {
  switch (family_) {
    case TargetFamily::kLaplace: {
      const double z = x / scale_;
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    case TargetFamily::kGauss:
      return 0.5 * std::erfc(-x / (scale_ * std::numbers::sqrt2));
    case TargetFamily::kExpr:
      return std::nullopt;
  }
  return std::nullopt;
}

double log_ratio(const Target& target, double x, double y) {
  if (x == y) return 0.0;
  return target.log_density(y) - target.log_density(x);
}

std::optional<double> tau_closed_form(const Target& target, double u) {
  if (u == 0.0) return 1.0;
  switch (target.family()) {
    case TargetFamily::kLaplace: return std::exp(-u / target.scale());
    case TargetFamily::kGauss: return 0.0;
    case TargetFamily::kExpr: return std::nullopt;
  }
  return std::nullopt;
}

Proposal Proposal::triangular(double s) {
  require_positive(s, "proposal range s");
  Proposal p;
  p.family_ = ProposalFamily::kTriangular;
  p.s_ = s;
  p.kinks_ = {0.0};
  p.finalize();
  return p;
}

Proposal Proposal::uniform(double s) {
  require_positive(s, "proposal range s");
  Proposal p;
  p.family_ = ProposalFamily::kUniform;
  p.s_ = s;
  p.finalize();
  return p;
}

Proposal Proposal::epanechnikov(double s) {
  require_positive(s, "proposal range s");
  Proposal p;
  p.family_ = ProposalFamily::kEpanechnikov;
  p.s_ = s;
  p.finalize();
  return p;
}

Proposal Proposal::from_expr(expr::Expr shape, double s) {
  require_positive(s, "proposal range s");
  if (shape.variable() != "u") throw ConfigError("proposal expression must use the variable u");
  Proposal p;
  p.family_ = ProposalFamily::kExpr;
  p.s_ = s;
  p.expr_ = std::move(shape);
  p.kinks_ = {0.0};

  // Range verification: the declared s is checked, never inferred.
  constexpr int kRangeProbes = 50;
  for (int i = 1; i <= kRangeProbes; ++i) {
    const double u = s + s * i / kRangeProbes;
    for (double v : {u, -u}) {
      if (p.expr_->eval(v) != 0.0) {
        throw ConfigError("proposal shape is nonzero at u = " + std::to_string(v) +
                          " outside the declared range s = " + std::to_string(s));
      }
    }
  }

  constexpr int kProbes = 257;
  bool even = true;
  for (int i = 0; i < kProbes; ++i) {
    const double u = -s + 2.0 * s * i / (kProbes - 1);
    const double v = p.expr_->eval(u);
    if (v < 0.0 || !std::isfinite(v)) {
      throw ConfigError("proposal shape must be finite and nonnegative; Delta(" +
                        std::to_string(u) + ") = " + std::to_string(v));
    }
    const double w = p.expr_->eval(-u);
    if (std::abs(v - w) > 1e-12 * std::max(1.0, std::abs(v))) even = false;
  }
  p.symmetric_ = even;
  p.finalize();
  return p;
}

std::string Proposal::name() const {
  switch (family_) {
    case ProposalFamily::kTriangular: return "triangular";
    case ProposalFamily::kUniform: return "uniform";
    case ProposalFamily::kEpanechnikov: return "epanechnikov";
    case ProposalFamily::kExpr: return "expr";
  }
  return "?";
}

double Proposal::shape(double u) const {
  const double a = std::abs(u);
  if (a > s_) return 0.0;
  switch (family_) {
    case ProposalFamily::kTriangular: return (1.0 - a / s_) / s_;
    case ProposalFamily::kUniform: return 0.5 / s_;
    case ProposalFamily::kEpanechnikov: {
      const double z = u / s_;
      return 0.75 / s_ * (1.0 - z * z);
    }
    case ProposalFamily::kExpr: return expr_->eval(u);
  }
  return 0.0;
}

void Proposal::finalize() {
  auto f = [this](double u) { return shape(u); };
  const SupResult sup = sup_scan(f, -s_, s_);
  sup_ = sup.max;
  if (!(sup_ > 0.0)) throw ConfigError("proposal shape vanishes identically on [-s, s]");

  const QuadResult mass = integrate(f, -s_, s_, AdaptiveSimpson{1e-12, 1e-12, 40}, kinks_);
  if (std::abs(mass.value - 1.0) > 1e-8) {
    throw ConfigError("proposal shape integrates to " + std::to_string(mass.value) +
                      " over [-s, s], expected 1");
  }

  constexpr int kInterior = 255;
  for (int i = 1; i < kInterior; ++i) {
    const double u = -s_ + 2.0 * s_ * i / kInterior;
    if (shape(u) <= 0.0) {
      positive_inside_ = false;
      warnings_.push_back("proposal shape vanishes at u = " + std::to_string(u) +
                          " inside (-s, s); the asymptotic tail bound assumes positivity");
      break;
    }
  }
  if (!symmetric_) {
    warnings_.push_back("proposal shape is not even; using the general q(x,y) kernel path");
  }
}

double TailRatio::extended(double u) const {
  if (u >= 0.0) return fn(u);
  const double t = fn(-u);
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / t;
}

TailRatio TailRatio::closed_form(const Target& target) {
  if (!target.is_builtin()) return unavailable();
  TailRatio out;
  out.mode = Mode::kClosedForm;
  out.fn = [target](double u) { return *tau_closed_form(target, u); };
  return out;
}

TailRatio TailRatio::from_function(std::function<double(double)> f,
                                   std::vector<double> breakpoints, Mode mode) {
  TailRatio out;
  out.mode = mode;
  out.fn = std::move(f);
  out.breakpoints = std::move(breakpoints);
  return out;
}

const char* to_string(TailRatio::Mode mode) {
  switch (mode) {
    case TailRatio::Mode::kClosedForm: return "closed-form";
    case TailRatio::Mode::kNumericLimit: return "numeric";
    case TailRatio::Mode::kUnavailable: return "unavailable";
  }
  return "?";
}

}  // namespace mhress
