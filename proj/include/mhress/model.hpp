#pragma once

// Target densities pi and proposal shapes Delta.
//
// Targets may be unnormalized: every quantity computed downstream depends on
// pi only through ratios pi(y)/pi(x), evaluated in log domain.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mhress/expr.hpp"
#include "mhress/quadrature.hpp"

namespace mhress {

enum class TargetFamily { kLaplace, kGauss, kExpr };

class Target {
 public:
  /// pi(x) = exp(-|x|/scale) / (2 scale)
  static Target laplace(double scale = 1.0);
  /// pi(x) = exp(-x^2 / (2 scale^2)) / (scale sqrt(2 pi))
  static Target gauss(double scale = 1.0);
  /// Possibly unnormalized density given as an expression in x.
  static Target from_expr(expr::Expr density);

  TargetFamily family() const { return family_; }
  double scale() const { return scale_; }
  bool is_builtin() const { return family_ != TargetFamily::kExpr; }
  const std::optional<expr::Expr>& expression() const { return expr_; }
  std::string name() const;

  double log_density(double x) const;
  double density(double x) const;

  /// Points where pi itself is not differentiable.
  std::vector<double> kinks() const;

  /// True for the built-in even, strictly unimodal families.
  bool even_unimodal() const { return is_builtin(); }

  /// Normalized CDF for the built-in families.
  std::optional<double> cdf(double x) const;

 private:
  Target(TargetFamily family, double scale, std::optional<expr::Expr> e)
      : family_(family), scale_(scale), expr_(std::move(e)) {}

  TargetFamily family_;
  double scale_ = 1.0;
  std::optional<expr::Expr> expr_;
};

/// log pi(y) - log pi(x); throws DomainError for non-positive custom density.
double log_ratio(const Target& target, double x, double y);

/// Closed-form tail ratio lim_{x -> +inf} pi(x + u) / pi(x) for u >= 0.
/// Laplace: exp(-u / scale). Gauss: 0 for u > 0, 1 at u = 0. Custom: nullopt.
std::optional<double> tau_closed_form(const Target& target, double u);

enum class ProposalFamily { kTriangular, kUniform, kEpanechnikov, kExpr };

/// Random-walk proposal q(x, y) = Delta(x - y) with Delta supported on [-s, s].
class Proposal {
 public:
  static Proposal triangular(double s = 1.0);
  static Proposal uniform(double s = 1.0);
  static Proposal epanechnikov(double s = 1.0);
  /// Custom shape in the variable u. The range s is declared, then verified:
  /// Delta must vanish for s < |u| <= 2s, be nonnegative and integrate to 1.
  static Proposal from_expr(expr::Expr shape, double s);

  ProposalFamily family() const { return family_; }
  std::string name() const;
  double range() const { return s_; }
  bool symmetric() const { return symmetric_; }

  /// Delta(u); zero for |u| > s regardless of the expression.
  double shape(double u) const;
  /// q(x, y) = Delta(x - y).
  double density(double x, double y) const { return shape(x - y); }

  /// sup of Delta over [-s, s], found by sup_scan at construction.
  double shape_sup() const { return sup_; }
  /// Kinks of Delta that quadrature should split at.
  const std::vector<double>& kinks() const { return kinks_; }

  /// Non-fatal diagnostics gathered at construction (e.g. Delta vanishing
  /// somewhere inside (-s, s)).
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool positive_inside() const { return positive_inside_; }

 private:
  Proposal() = default;
  void finalize();

  ProposalFamily family_ = ProposalFamily::kTriangular;
  double s_ = 1.0;
  bool symmetric_ = true;
  double sup_ = 0.0;
  bool positive_inside_ = true;
  std::optional<expr::Expr> expr_;
  std::vector<double> kinks_;
  std::vector<std::string> warnings_;
};

/// u -> tau(u) on [0, s] together with how it was obtained.
struct TailRatio {
  enum class Mode { kClosedForm, kNumericLimit, kUnavailable };

  Mode mode = Mode::kUnavailable;
  std::function<double(double)> fn;
  std::vector<double> breakpoints;  // kinks of tau in (0, s), for quadrature

  bool available() const { return mode != Mode::kUnavailable; }
  double operator()(double u) const { return fn(u); }
  /// Extension to negative u via tau(-u) = 1 / tau(u), with 1/0 = +inf.
  double extended(double u) const;

  static TailRatio closed_form(const Target& target);
  static TailRatio from_function(std::function<double(double)> f,
                                 std::vector<double> breakpoints = {},
                                 Mode mode = Mode::kNumericLimit);
  static TailRatio unavailable() { return {}; }
};

const char* to_string(TailRatio::Mode mode);

}  // namespace mhress
