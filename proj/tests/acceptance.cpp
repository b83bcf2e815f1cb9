// Acceptance run: one PASS/FAIL line per criterion with its runtime.
// Exit status is nonzero when any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhress/asymptotics.hpp"
#include "mhress/bounds.hpp"
#include "mhress/commands.hpp"
#include "mhress/jacobi.hpp"
#include "mhress/quadrature.hpp"
#include "mhress/sampler.hpp"
#include "mhress/spectra.hpp"

using namespace mhress;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const double kE = std::exp(1.0);
const double kLaplaceGamma = 8.0 * std::exp(-0.5) - std::exp(-1.0) - 3.5;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
    pass = pass && ok;
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

MhKernel laplace_tri() { return MhKernel(Target::laplace(), Proposal::triangular()); }
MhKernel gauss_tri() { return MhKernel(Target::gauss(), Proposal::triangular()); }

std::string family_name(const MhKernel& k) {
  return k.target().family() == TargetFamily::kLaplace ? "laplace" : "gauss";
}

// Runs a CLI command in-process and returns its JSON envelope.
json command(const std::string& name, const std::vector<std::string>& overrides) {
  CommandOptions opts;
  opts.command = name;
  opts.overrides = overrides;
  opts.out_dir = (fs::temp_directory_path() / ("mhress_acceptance_" + std::to_string(::getpid()))).string();
  opts.format = "json";
  std::ostringstream out, err;
  const int code = run_command(opts, out, err);
  std::ifstream in(fs::path(opts.out_dir) / (name + ".json"));
  json doc = json::parse(in);
  doc["exit_code_seen"] = code;
  return doc;
}

// Composite Simpson on a fixed grid, independent of the library rules.
template <class F>
double simpson(F f, double lo, double hi, int n = 20000) {
  const double h = (hi - lo) / n;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return acc * h / 3.0;
}

Outcome laplace_example(double& seconds_limit) {
  seconds_limit = 5.0;
  Outcome o;
  const json doc = command("asymptotic", {});
  const json& r = doc["result"];
  const double gamma = r["gamma_inf"].get<double>();
  const double alpha = r["alpha_inf"].get<double>();
  const double r_inf = r["r_inf"].get<double>();
  o.require(doc["exit_code_seen"] == kExitOk, "exit 0");
  o.require(std::abs(gamma - kLaplaceGamma) <= 1e-6, "gamma_inf=" + num(gamma) + " vs 0.984366 (1e-6)");
  o.require(alpha == gamma, "alpha_inf=" + num(alpha) + " equals gamma_inf");
  o.require(r_inf < gamma, "r_inf=" + num(r_inf) + " < gamma_inf");
  o.require(r_inf <= 1.0 - 1.0 / kE, "r_inf <= 1 - 1/e = " + num(1.0 - 1.0 / kE));
  return o;
}

Outcome gauss_example(double& seconds_limit) {
  seconds_limit = 5.0;
  Outcome o;
  const json doc = command("asymptotic", {"target.family=gauss"});
  const json& r = doc["result"];
  const double gamma = r["gamma_inf"].get<double>();
  const double alpha = r["alpha_inf"].get<double>();
  const double r_inf = r["r_inf"].get<double>();
  o.require(std::abs(gamma - 0.5) <= 1e-9, "gamma_inf=" + num(gamma) + " vs 0.5 (1e-9)");

  auto hand_integrand = [](double u) { return (1.0 - u) * std::exp(-(u + 1.0) * (u + 1.0) / 2.0); };
  const double lib = integrate(hand_integrand, 0.0, 1.0, AdaptiveSimpson{1e-12, 1e-12, 40}).value;
  const double hand = 1.0 - std::exp(-0.5) - std::exp(0.125) * lib;
  const double hand_oracle = 1.0 - std::exp(-0.5) - std::exp(0.125) * simpson(hand_integrand, 0.0, 1.0);
  o.require(std::abs(hand - hand_oracle) <= 1e-4 && hand <= 0.156,
            "hand bound by quadrature=" + num(hand) + " <= 0.156");
  o.require(r_inf <= 0.156, "computed r_inf=" + num(r_inf) + " <= 0.156");
  o.require(std::abs(alpha - 0.5) <= 1e-9, "alpha_inf=" + num(alpha) + " vs 0.5");
  return o;
}

Outcome windowed_convergence(double& seconds_limit) {
  seconds_limit = 60.0;
  Outcome o;
  for (const char* family : {"laplace", "gauss"}) {
    const json doc = command("bound", {std::string("target.family=") + family, "bound.a_list=[4, 8, 16]"});
    const json& res = doc["result"];
    const double alpha_inf = res["alpha_inf"].get<double>();
    std::string values;
    bool ok = true;
    for (const json& rep : res["reports"]) {
      const double a = rep["alpha_a"].get<double>();
      values += (values.empty() ? "" : ",") + num(a);
      ok = ok && std::abs(a - alpha_inf) <= 1e-3;
    }
    o.require(ok, std::string(family) + " alpha_a(4,8,16)=" + values + " vs alpha_inf=" + num(alpha_inf) + " (1e-3)");
  }
  return o;
}

// Piecewise-linear tau through random knots in [0, 1], tau(0) = 1.
TailRatio synthetic_tau(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int knots = 2 + static_cast<int>(rng() % 7);
  std::vector<double> xs{0.0};
  std::vector<double> ys{1.0};
  for (int i = 1; i <= knots; ++i) {
    xs.push_back(static_cast<double>(i) / knots);
    ys.push_back(unif(rng));
  }
  auto f = [xs, ys](double u) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (u <= xs[i]) return ys[i - 1] + (u - xs[i - 1]) / (xs[i] - xs[i - 1]) * (ys[i] - ys[i - 1]);
    }
    return ys.back();
  };
  return TailRatio::from_function(f, std::vector<double>(xs.begin() + 1, xs.end() - 1));
}

Outcome identity(double&) {
  Outcome o;
  const Proposal p = Proposal::triangular();
  double worst = 0.0;
  for (const Target& t : {Target::laplace(), Target::gauss()}) {
    const TailRatio tau = TailRatio::closed_form(t);
    worst = std::max(worst, std::abs(r_prime_inf(p, tau) + beta_inf(p, tau) - gamma_inf(p, tau)));
  }
  o.require(worst <= 2e-9, "built-ins max residual=" + num(worst));
  std::mt19937_64 rng(20250);
  worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const TailRatio tau = synthetic_tau(rng);
    worst = std::max(worst, std::abs(r_prime_inf(p, tau) + beta_inf(p, tau) - gamma_inf(p, tau)));
  }
  o.require(worst <= 2e-9, "50 synthetic tau max residual=" + num(worst));
  return o;
}

Outcome detailed_balance(double&) {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xs(-20.0, 20.0);
  std::uniform_real_distribution<double> us(-1.0, 1.0);
  for (const MhKernel& k : {laplace_tri(), gauss_tri()}) {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double x = xs(rng);
      worst = std::max(worst, k.detailed_balance_residual(x, x + us(rng)));
    }
    o.require(worst <= 1e-10, family_name(k) + " max residual=" + num(worst));
  }
  return o;
}

Outcome tail_norm(double& seconds_limit) {
  seconds_limit = 120.0;
  Outcome o;
  for (const MhKernel& k : {laplace_tri(), gauss_tri()}) {
    const Discretization d = Discretization::uniform(k.target(), 30.0, 801);
    const TransitionMatrix p = build_p_matrix(k, d);
    const TailModel tails = make_tail_model(k.target(), k.range());
    for (double a : {2.0, 5.0, 10.0}) {
      const double b = beta(k, a, default_x_max(k, a), tails).value;
      const double norm = norm_T_ac(p, d, a);
      o.require(norm <= b + 0.01, family_name(k) + " a=" + num(a) + " norm=" + num(norm) +
                                      " beta=" + num(b));
    }
  }
  return o;
}

Outcome decomposition(double&) {
  Outcome o;
  for (const MhKernel& k : {laplace_tri(), gauss_tri()}) {
    const Discretization d = Discretization::uniform(k.target(), 20.0, 401);
    const TransitionMatrix p = build_p_matrix(k, d);
    const TailModel tails = make_tail_model(k.target(), k.range());
    for (double a : {2.0, 5.0, 10.0}) {
      const double alpha_a = alpha(k, a, default_x_max(k, a), tails).alpha_a;
      const DecompositionCheck c = decomposition_residual(p, d, a, 4, alpha_a);
      o.require(c.residual <= 5e-3, family_name(k) + " a=" + num(a) +
                                        " max(norm - 2 alpha^n)=" + num(c.residual));
    }
  }
  return o;
}

Outcome spectral_sanity(double&) {
  Outcome o;
  for (const MhKernel& k : {laplace_tri(), gauss_tri()}) {
    const Discretization d = Discretization::uniform(k.target(), 20.0, 401);
    const TransitionMatrix p = build_p_matrix(k, d);
    const Eigen::MatrixXd s = symmetrize(p.transition, d);
    JacobiEigenSolver<double>::Options opts;
    opts.compute_vectors = true;
    const JacobiEigenSolver<double> js(0.5 * (s + s.transpose()), opts);
    int near_one = 0;
    for (int i = 0; i < js.eigenvalues().size(); ++i) {
      if (std::abs(js.eigenvalues()(i) - 1.0) <= 5e-4) ++near_one;
    }
    Eigen::VectorXd v = js.eigenvectors().col(0);
    Eigen::VectorXd ref = d.masses.array().sqrt();
    ref.normalize();
    if (v.dot(ref) < 0) v = -v;
    const double rel = (v - ref).norm() / ref.norm();
    const std::string name = family_name(k);
    o.require(near_one == 1, name + " eigenvalues within 5e-4 of 1: " + std::to_string(near_one));
    o.require(rel <= 1e-3, name + " eigenvector vs sqrt(m) relative error=" + num(rel));
  }
  return o;
}

Outcome sampler_validation(double&) {
  Outcome o;
  const MhKernel k = laplace_tri();
  const long trials = 1000000;
  const double r0 = empirical_rejection(k, 0.0, trials, 2024);
  const double exact = 1.0 - 2.0 / kE;
  const double sigma = std::sqrt(exact * (1.0 - exact) / trials);
  o.require(std::abs(r0 - exact) <= 4.0 * sigma,
            "empirical r(0)=" + num(r0) + " vs " + num(exact) + " (4 sigma=" + num(4.0 * sigma) + ")");

  ChainConfig cfg;
  cfg.steps = 1000000;
  cfg.burn_in = 1000;
  cfg.seed = 2024;
  const ChainSummary s = run(k, cfg);
  const std::vector<double> bps = {-1.0, 0.0, 1.0};
  const double er = integrate([&](double x) { return k.rejection_prob(x) * k.target().density(x); }, -40.0, 40.0,
                              AdaptiveSimpson{1e-11, 1e-10, 30}, bps)
                        .value;
  const double se = s.pooled.acceptance_std_error;
  o.require(std::abs(s.pooled.acceptance_rate - (1.0 - er)) <= 3.0 * se,
            "pooled acceptance=" + num(s.pooled.acceptance_rate) + " vs 1 - E[r]=" + num(1.0 - er) +
                " (3 sigma=" + num(3.0 * se) + ")");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome(double&)> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "Laplace asymptotic example", laplace_example},
      {2, "Gauss asymptotic example", gauss_example},
      {3, "windowed bounds approach the limit", windowed_convergence},
      {4, "limit identity r'_inf + beta_inf = gamma_inf", identity},
      {5, "detailed balance", detailed_balance},
      {6, "tail operator norm within beta_a", tail_norm},
      {7, "power decomposition inequality", decomposition},
      {8, "discrete spectral sanity", spectral_sanity},
      {9, "sampler validation", sampler_validation},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    double limit = 0.0;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body(limit);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit > 0.0) o.require(seconds < limit, "runtime < " + num(limit) + " s");
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
