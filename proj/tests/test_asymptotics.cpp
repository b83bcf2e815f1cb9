#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mhress/asymptotics.hpp"
#include "mhress/errors.hpp"
#include "mhress/expr.hpp"

using namespace mhress;

namespace {

const double kE = std::exp(1.0);
const double kLaplaceGamma = 8.0 * std::exp(-0.5) - std::exp(-1.0) - 3.5;

// Piecewise-linear tau through random knots in [0, 1], tau(0) = 1.
TailRatio synthetic_tau(std::mt19937_64& rng, double s) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int knots = 2 + static_cast<int>(rng() % 7);
  std::vector<double> xs{0.0};
  std::vector<double> ys{1.0};
  for (int i = 1; i <= knots; ++i) {
    xs.push_back(s * i / knots);
    ys.push_back(unif(rng));
  }
  auto f = [xs, ys](double u) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (u <= xs[i]) {
        const double w = (u - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return ys[i - 1] + w * (ys[i] - ys[i - 1]);
      }
    }
    return ys.back();
  };
  std::vector<double> bps(xs.begin() + 1, xs.end() - 1);
  return TailRatio::from_function(f, bps);
}

}  // namespace

TEST_CASE("numeric tail ratio") {
  const TauEstimate l = tau_numeric(Target::laplace(), 0.5);
  CHECK(l.converged);
  CHECK(l.value == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
  const TauEstimate g = tau_numeric(Target::gauss(), 0.5);
  CHECK(g.converged);
  CHECK(g.value <= 1e-6);
  const TauEstimate z = tau_numeric(Target::gauss(), 0.0);
  CHECK(z.value == 1.0);
}

TEST_CASE("numeric and closed-form tail ratios agree") {
  for (const Target& t : {Target::laplace(), Target::gauss(), Target::laplace(0.5)}) {
    const TailRatio closed = TailRatio::closed_form(t);
    for (int i = 1; i <= 33; ++i) {
      const double u = i / 33.0;
      CHECK(tau_numeric(t, u).value == doctest::Approx(closed(u)).epsilon(1e-5));
    }
  }
}

TEST_CASE("numeric tail ratio for expression targets") {
  const Target t = Target::from_expr(expr::parse("exp(-abs(x)) * 3", "x"));
  const TailRatio tau = make_tail_ratio(t, 1.0);
  REQUIRE(tau.available());
  CHECK(tau.mode == TailRatio::Mode::kNumericLimit);
  CHECK(tau(0.4) == doctest::Approx(std::exp(-0.4)).epsilon(1e-6));

  // Different tails on the two sides.
  const Target skew = Target::from_expr(expr::parse("exp(-max(2*x, -x))", "x"));
  const TailModel tails = make_tail_model(skew, 1.0);
  CHECK(tails.right(0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(tails.left(0.5) == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
}

TEST_CASE("tail ratio reflection identity") {
  const TailRatio tau = TailRatio::closed_form(Target::laplace(2.0));
  for (double u = 0.0; u <= 1.0; u += 0.1) CHECK(tau.extended(-u) * tau(u) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("limits for Laplace and triangular") {
  const Proposal p = Proposal::triangular();
  const TailRatio tau = TailRatio::closed_form(Target::laplace());
  CHECK(gamma_inf(p, tau) == doctest::Approx(kLaplaceGamma).epsilon(1e-12));
  CHECK(r_prime_inf(p, tau) == doctest::Approx(0.5 - 1.0 / kE).epsilon(1e-12));
  CHECK(beta_inf(p, tau) == doctest::Approx(8.0 * std::exp(-0.5) - 4.0).epsilon(1e-12));
}

TEST_CASE("limits for Gauss and triangular") {
  const Proposal p = Proposal::triangular();
  const TailRatio tau = TailRatio::closed_form(Target::gauss());
  CHECK(std::abs(gamma_inf(p, tau) - 0.5) <= 1e-12);
  CHECK(std::abs(r_prime_inf(p, tau) - 0.5) <= 1e-12);
  CHECK(std::abs(beta_inf(p, tau)) <= 1e-12);
}

TEST_CASE("constant tail ratio one is degenerate") {
  const Proposal p = Proposal::triangular();
  const TailRatio one = TailRatio::from_function([](double) { return 1.0; });
  CHECK(gamma_inf(p, one) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(r_prime_inf(p, one)) <= 1e-12);
  CHECK(beta_inf(p, one) == doctest::Approx(1.0).epsilon(1e-12));

  const MhKernel k(Target::laplace(), p);
  const AsymptoticReport rep = alpha_inf(k, one, 20.0);
  CHECK(rep.degenerate);
  CHECK_FALSE(rep.certified());
  CHECK(rep.verdict().find("no certification") != std::string::npos);
}

TEST_CASE("identity r'_inf + beta_inf = gamma_inf") {
  for (const Proposal& p : {Proposal::triangular(), Proposal::uniform(2.0), Proposal::epanechnikov(0.5)}) {
    for (const Target& t : {Target::laplace(), Target::gauss(), Target::laplace(3.0)}) {
      const TailRatio tau = TailRatio::closed_form(t);
      CHECK(std::abs(r_prime_inf(p, tau) + beta_inf(p, tau) - gamma_inf(p, tau)) <= 2e-9);
    }
  }
  std::mt19937_64 rng(2025);
  const Proposal p = Proposal::triangular();
  for (int i = 0; i < 50; ++i) {
    const TailRatio tau = synthetic_tau(rng, 1.0);
    const double g = gamma_inf(p, tau);
    CHECK(std::abs(r_prime_inf(p, tau) + beta_inf(p, tau) - g) <= 2e-9);
    CHECK(g <= 1.0);
  }
}

TEST_CASE("gamma_inf < 1 exactly when not degenerate") {
  std::mt19937_64 rng(17);
  const MhKernel k(Target::laplace(), Proposal::triangular());
  for (int i = 0; i < 10; ++i) {
    const TailRatio tau = synthetic_tau(rng, 1.0);
    const AsymptoticReport rep = alpha_inf(k, tau, 10.0);
    CHECK(rep.gamma_inf <= 1.0);
    CHECK((rep.gamma_inf < 1.0) == !rep.degenerate);
  }
}

TEST_CASE("asymptotic reports for the built-in pairings") {
  const MhKernel l(Target::laplace(), Proposal::triangular());
  const AsymptoticReport lr = alpha_inf(l, TailRatio::closed_form(l.target()), 51.0);
  CHECK(lr.gamma_inf == doctest::Approx(kLaplaceGamma).epsilon(1e-9));
  CHECK(lr.alpha_inf == doctest::Approx(lr.gamma_inf).epsilon(1e-15));
  CHECK(lr.r_inf == doctest::Approx(1.0 - 2.0 / kE).epsilon(1e-9));
  CHECK(lr.r_inf <= 1.0 - 1.0 / kE);
  CHECK(lr.hypotheses_verified());
  CHECK(lr.certified());
  CHECK(lr.tau_samples.size() == 33);

  const MhKernel g(Target::gauss(), Proposal::triangular());
  const AsymptoticReport gr = alpha_inf(g, TailRatio::closed_form(g.target()), 51.0);
  CHECK(std::abs(gr.gamma_inf - 0.5) <= 1e-9);
  CHECK(std::abs(gr.alpha_inf - 0.5) <= 1e-9);
  CHECK(gr.certified());
}

TEST_CASE("hypotheses are checked") {
  const Proposal skew = Proposal::from_expr(expr::parse("max(0, 1 - abs(u)) * (1 + 0.5*u)", "u"), 1.0);
  CHECK_THROWS_AS(gamma_inf(skew, TailRatio::closed_form(Target::laplace())), HypothesisError);
  CHECK_THROWS_AS(gamma_inf(Proposal::triangular(), TailRatio::unavailable()), HypothesisError);

  const Target uneven = Target::from_expr(expr::parse("exp(-max(2*x, -x))", "x"));
  const MhKernel k(uneven, Proposal::triangular());
  const AsymptoticReport rep = alpha_inf(k, make_tail_ratio(uneven, 1.0), 20.0);
  CHECK_FALSE(rep.even_verified);
  CHECK_FALSE(rep.hypotheses_verified());
  CHECK_FALSE(rep.warnings.empty());
}
