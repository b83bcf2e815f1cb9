#pragma once

// One-dimensional quadrature and supremum scanning.
//
// Every integral in the bound computations (rejection probabilities, the
// beta constants, the tail-ratio closed forms) goes through integrate(), and
// every supremum over an x-interval goes through sup_scan().

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace mhress {

/// Composite Gauss-Legendre with `nodes` points on each of `panels` equal panels.
struct GaussLegendre {
  int nodes = 16;
  int panels = 64;
};

/// Recursive adaptive Simpson with Richardson correction.
struct AdaptiveSimpson {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_depth = 40;
};

using QuadratureRule = std::variant<GaussLegendre, AdaptiveSimpson>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;      // difference between successive refinements
  bool converged = true;   // false when adaptive recursion hit max_depth
  long evaluations = 0;
};

/// Nodes and weights of the k-point Gauss-Legendre rule on [-1, 1].
/// Computed once per k by Newton iteration on P_k and cached.
const std::vector<std::pair<double, double>>& gauss_legendre_table(int k);

namespace detail {

template <class F>
double gl_panels(F& f, double lo, double hi, int panels,
                 const std::vector<std::pair<double, double>>& table, long& evals) {
  const double width = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    const double half = 0.5 * width;
    double s = 0.0;
    for (const auto& [node, weight] : table) s += weight * f(mid + half * node);
    total += half * s;
    evals += static_cast<long>(table.size());
  }
  return total;
}

template <class F>
QuadResult gauss_legendre(F& f, double lo, double hi, const GaussLegendre& rule) {
  QuadResult out;
  if (hi == lo) return out;
  const auto& table = gauss_legendre_table(rule.nodes);
  const int panels = std::max(rule.panels, 2);
  out.value = gl_panels(f, lo, hi, panels, table, out.evaluations);
  const double coarse = gl_panels(f, lo, hi, panels / 2, table, out.evaluations);
  out.error = std::abs(out.value - coarse);
  return out;
}

struct SimpsonState {
  long evals = 0;
  double error = 0.0;
  bool converged = true;
};

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth, SimpsonState& st) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  st.evals += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || !(b - a > 0.0) || depth <= 0) {
    if (depth <= 0 && std::abs(delta) > 15.0 * tol) st.converged = false;
    st.error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, st) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, st);
}

template <class F>
QuadResult adaptive_simpson(F& f, double lo, double hi, const AdaptiveSimpson& rule) {
  QuadResult out;
  if (hi == lo) return out;
  SimpsonState st;
  // Seed on four sub-panels so a symmetric integrand cannot fool the first
  // comparison with coincidentally equal estimates.
  constexpr int kSeed = 4;
  const double width = (hi - lo) / kSeed;
  std::vector<double> fx(2 * kSeed + 1);
  for (int i = 0; i <= 2 * kSeed; ++i) fx[i] = f(lo + 0.5 * width * i);
  st.evals += 2 * kSeed + 1;
  double magnitude = 0.0;
  std::vector<double> coarse(kSeed);
  for (int p = 0; p < kSeed; ++p) {
    coarse[p] = width / 6.0 * (fx[2 * p] + 4.0 * fx[2 * p + 1] + fx[2 * p + 2]);
    magnitude += std::abs(coarse[p]);
  }
  const double tol = std::max(rule.abs_tol, rule.rel_tol * magnitude);
  double total = 0.0;
  for (int p = 0; p < kSeed; ++p) {
    const double a = lo + p * width;
    total += simpson_recurse(f, a, a + width, fx[2 * p], fx[2 * p + 1], fx[2 * p + 2],
                             coarse[p], tol / kSeed, rule.max_depth, st);
  }
  out.value = total;
  out.error = st.error;
  out.converged = st.converged;
  out.evaluations = st.evals;
  return out;
}

}  // namespace detail

/// Integrates f over [lo, hi]. Breakpoints strictly inside (lo, hi) split the
/// interval so kinks of the integrand fall on panel boundaries.
template <class F>
QuadResult integrate(F&& f, double lo, double hi, const QuadratureRule& rule,
                     std::span<const double> breakpoints = {}) {
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(hi);

  QuadResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadResult piece = std::visit(
        [&](const auto& r) {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, GaussLegendre>) {
            return detail::gauss_legendre(f, cuts[i], cuts[i + 1], r);
          } else {
            return detail::adaptive_simpson(f, cuts[i], cuts[i + 1], r);
          }
        },
        rule);
    total.value += piece.value;
    total.error += piece.error;
    total.converged = total.converged && piece.converged;
    total.evaluations += piece.evaluations;
  }
  return total;
}

/// Grid-plus-refinement supremum search over [lo, hi].
struct SupScan {
  double step = 0.0;              // coarse step; 0 means (hi - lo) / coarse_intervals
  int coarse_intervals = 2048;
  double tol_x = 1e-8;            // refinement stops once the bracket is this narrow
  int max_refine = 200;
};

struct SupResult {
  double argmax = 0.0;
  double max = -std::numeric_limits<double>::infinity();
  bool converged = true;
};

/// The returned max dominates every coarse grid value. Accuracy relies on the
/// function varying little over one coarse step; the refinement is a ternary
/// search on the bracket around the best coarse node.
template <class F>
SupResult sup_scan(F&& f, double lo, double hi, const SupScan& cfg = {}) {
  SupResult out;
  if (!(hi > lo)) {
    out.argmax = lo;
    out.max = f(lo);
    return out;
  }
  int intervals = cfg.coarse_intervals;
  if (cfg.step > 0.0) {
    intervals = static_cast<int>(std::ceil((hi - lo) / cfg.step));
  }
  intervals = std::max(intervals, 2);
  const double h = (hi - lo) / intervals;

  int best = 0;
  for (int i = 0; i <= intervals; ++i) {
    const double x = (i == intervals) ? hi : lo + i * h;
    const double v = f(x);
    if (v > out.max) {
      out.max = v;
      out.argmax = x;
      best = i;
    }
  }

  double a = lo + std::max(best - 1, 0) * h;
  double b = (best + 1 >= intervals) ? hi : lo + (best + 1) * h;
  int iter = 0;
  while (b - a > cfg.tol_x && iter < cfg.max_refine) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    const double v1 = f(m1);
    const double v2 = f(m2);
    if (v1 > out.max) {
      out.max = v1;
      out.argmax = m1;
    }
    if (v2 > out.max) {
      out.max = v2;
      out.argmax = m2;
    }
    if (v1 < v2) {
      a = m1;
    } else {
      b = m2;
    }
    ++iter;
  }
  out.converged = (b - a) <= cfg.tol_x;
  return out;
}

}  // namespace mhress
