#include "mhress/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "mhress/errors.hpp"

namespace mhress {

namespace {

constexpr double kFlatTailTol = 1e-6;
constexpr double kOuterFraction = 0.1;

struct WindowSup {
  SupResult sup;
  bool flat = true;  // sup is interior, or the outer 10% of the window is flat
};

// sup over a < |x| <= x_max of f, both tails.
template <class F>
WindowSup tail_window_sup(F&& f, double a, double x_max, const SupScan& scan, bool check_flat) {
  const SupResult right = sup_scan([&](double x) { return f(x); }, a, x_max, scan);
  const SupResult left = sup_scan([&](double x) { return f(-x); }, a, x_max, scan);
  WindowSup out;
  out.sup = right;
  if (left.max > right.max) {
    out.sup = left;
    out.sup.argmax = -left.argmax;
  }
  out.sup.converged = right.converged && left.converged;
  if (check_flat) {
    const double inner = x_max - kOuterFraction * (x_max - a);
    SupScan coarse = scan;
    coarse.coarse_intervals = std::max(64, scan.coarse_intervals / 8);
    coarse.step = 0.0;
    // Per tail: either the supremum is attained well inside the window, or
    // the function has stopped moving near the outer edge.
    auto resolved = [&](double side_max, double sign) {
      const double strip_max = sup_scan([&](double x) { return f(sign * x); }, inner, x_max, coarse).max;
      const double strip_min = -sup_scan([&](double x) { return -f(sign * x); }, inner, x_max, coarse).max;
      return side_max - strip_max > kFlatTailTol || strip_max - strip_min <= kFlatTailTol;
    };
    out.flat = resolved(right.max, 1.0) && resolved(left.max, -1.0);
  }
  return out;
}

void check_radius(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("truncation radius a must be positive");
}

}  // namespace

double default_x_max(const MhKernel& kernel, double a) { return a + 50.0 * kernel.range(); }

std::vector<double> default_a_list(double s) { return {s, 2 * s, 4 * s, 8 * s, 16 * s}; }

CompactSup r_sup_compact(const MhKernel& kernel, double a, const SupScan& scan) {
  check_radius(a);
  double worst_error = 0.0;
  bool quad_ok = true;
  auto r = [&](double x) {
    const Rejection rej = kernel.rejection(x);
    worst_error = std::max(worst_error, rej.error);
    quad_ok = quad_ok && rej.converged;
    return rej.value;
  };
  const SupResult sup = sup_scan(r, -a, a, scan);
  return {sup.max, sup.argmax, worst_error, sup.converged && quad_ok};
}

TailSup r_sup_tail(const MhKernel& kernel, double a, double x_max, const TailModel& tails,
                   const SupScan& scan) {
  check_radius(a);
  if (!(x_max > a)) throw std::invalid_argument("tail window requires x_max > a");
  double worst_error = 0.0;
  bool quad_ok = true;
  auto r = [&](double x) {
    const Rejection rej = kernel.rejection(x);
    worst_error = std::max(worst_error, rej.error);
    quad_ok = quad_ok && rej.converged;
    return rej.value;
  };
  const bool symmetric = kernel.proposal().symmetric();
  const bool asymptote = symmetric && tails.available();
  const WindowSup w = tail_window_sup(r, a, x_max, scan, !asymptote);

  TailSup out;
  out.window_max = w.sup.max;
  out.argmax = w.sup.argmax;
  out.value = w.sup.max;
  out.error = worst_error;
  out.converged = w.sup.converged && quad_ok;
  if (asymptote) {
    out.has_asymptote = true;
    out.asymptote = std::max(r_prime_inf(kernel.proposal(), tails.right),
                             r_prime_inf(kernel.proposal(), tails.left));
    if (out.asymptote > out.value) {
      out.value = out.asymptote;
      out.argmax = std::numeric_limits<double>::infinity();
    }
    out.tail_resolved = true;
  } else {
    out.tail_resolved = w.flat;
  }
  out.converged = out.converged && out.tail_resolved;
  return out;
}

double beta_integrand(const MhKernel& kernel, double x, double u) {
  if (std::abs(u) > kernel.range()) return 0.0;
  if (kernel.proposal().symmetric()) {
    const double delta = kernel.proposal().shape(u);
    if (delta == 0.0) return 0.0;
    const double lr = log_ratio(kernel.target(), x, x + u);
    return delta * std::exp(-0.5 * std::abs(lr));
  }
  const double forward = kernel.t(x, u);
  const double backward = kernel.t(x + u, -u);
  return std::sqrt(forward * backward);
}

BetaValue beta(const MhKernel& kernel, double a, double x_max, const TailModel& tails,
               const BoundOptions& opts) {
  check_radius(a);
  if (!(x_max > a)) throw std::invalid_argument("tail window requires x_max > a");
  const Proposal& proposal = kernel.proposal();
  const double s = proposal.range();
  const bool asymptote = proposal.symmetric() && tails.available();
  if (opts.even_shortcut && !proposal.symmetric()) {
    throw std::invalid_argument("even-integrand shortcut requires a symmetric proposal");
  }

  bool scans_ok = true;
  bool flat = true;
  auto inner_sup = [&](double u) {
    const WindowSup w = tail_window_sup([&](double x) { return beta_integrand(kernel, x, u); }, a,
                                        x_max, opts.scan, !asymptote);
    scans_ok = scans_ok && w.sup.converged;
    flat = flat && w.flat;
    double value = w.sup.max;
    if (asymptote) {
      const double au = std::abs(u);
      const double limit =
          proposal.shape(u) * std::max(std::sqrt(tails.right(au)), std::sqrt(tails.left(au)));
      value = std::max(value, limit);
    }
    return value;
  };

  const std::vector<double> bps = proposal.kinks();
  QuadResult q;
  if (opts.even_shortcut) {
    q = integrate(inner_sup, 0.0, s, opts.outer, bps);
    q.value *= 2.0;
    q.error *= 2.0;
  } else {
    q = integrate(inner_sup, -s, s, opts.outer, bps);
  }
  BetaValue out;
  out.value = q.value;
  out.error = q.error;
  out.tail_resolved = asymptote || flat;
  out.converged = q.converged && scans_ok && out.tail_resolved;
  return out;
}

std::string BoundReport::verdict() const {
  if (certified()) return "quasi-compact certified at level alpha_a = " + std::to_string(alpha_a);
  if (!tail_resolved) return "no certification: TailNotResolved (window supremum is a lower estimate, not a bound)";
  if (!converged()) return "no certification: a supremum scan or quadrature did not converge";
  return "no certification: alpha_a >= 1";
}

BoundReport alpha(const MhKernel& kernel, double a, double x_max, const TailModel& tails,
                  const BoundOptions& opts) {
  const CompactSup compact = r_sup_compact(kernel, a, opts.scan);
  const TailSup tail = r_sup_tail(kernel, a, x_max, tails, opts.scan);
  const BetaValue b = beta(kernel, a, x_max, tails, opts);

  BoundReport rep;
  rep.a = a;
  rep.x_max = x_max;
  rep.r_a = compact.value;
  rep.r_a_argmax = compact.argmax;
  rep.r_a_converged = compact.converged;
  rep.r_a_error = compact.error;
  rep.r_prime_a = tail.value;
  rep.r_prime_argmax = tail.argmax;
  rep.r_prime_converged = tail.converged;
  rep.r_prime_error = tail.error;
  rep.beta_a = b.value;
  rep.beta_converged = b.converged;
  rep.beta_error = b.error;
  rep.tail_resolved = tail.tail_resolved && b.tail_resolved;
  rep.alpha_a = std::max(rep.r_a, rep.r_prime_a + rep.beta_a);

  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, rep.alpha_a);
  rep.alpha_error = rounding + (rep.r_a >= rep.r_prime_a + rep.beta_a
                                    ? rep.r_a_error
                                    : rep.r_prime_error + rep.beta_error);
  if (!rep.tail_resolved) {
    rep.warnings.push_back("TailNotResolved: no tail asymptote and the window supremum is still "
                           "moving near x_max; r'_a and beta_a are lower estimates");
  }
  for (const auto& w : kernel.proposal().warnings()) rep.warnings.push_back(w);
  return rep;
}

BoundProfile bound_profile(const MhKernel& kernel, std::span<const double> a_list, double x_max,
                           const TailModel& tails, const BoundOptions& opts) {
  if (a_list.empty()) throw std::invalid_argument("a_list is empty");
  for (std::size_t i = 0; i < a_list.size(); ++i) {
    check_radius(a_list[i]);
    if (i > 0 && !(a_list[i] > a_list[i - 1])) {
      throw std::invalid_argument("a_list must be strictly increasing");
    }
  }
  if (!(x_max > a_list.back())) throw std::invalid_argument("x_max must exceed every a");

  std::vector<std::future<BoundReport>> jobs;
  jobs.reserve(a_list.size());
  for (double a : a_list) {
    jobs.push_back(std::async(std::launch::async,
                              [&kernel, &tails, &opts, a, x_max] { return alpha(kernel, a, x_max, tails, opts); }));
  }
  BoundProfile out;
  for (auto& j : jobs) out.reports.push_back(j.get());
  for (std::size_t i = 1; i < out.reports.size(); ++i) {
    if (out.reports[i].alpha_a < out.reports[out.best].alpha_a) out.best = i;
  }
  return out;
}

}  // namespace mhress
