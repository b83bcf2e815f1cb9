#pragma once

// Seedable random-walk Metropolis-Hastings simulation for empirical checks of
// r(x) and of pi-invariance.
//
// Random streams: chain c of a run with seed S uses std::mt19937_64 seeded with
// splitmix64(S + c). Uniforms on [0, 1) are (bits >> 11) * 2^-53, so streams are
// reproducible bit-for-bit independently of the standard library's
// distribution implementations.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "mhress/kernel.hpp"

namespace mhress {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(seed + index); }

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// Exact rejection sampling of v ~ Delta under the box [-s, s] x [0, height].
class ProposalSampler {
 public:
  /// `declared_sup`, when given, must dominate the scanned sup of Delta.
  explicit ProposalSampler(const Proposal& proposal, std::optional<double> declared_sup = std::nullopt);

  double operator()(Rng& rng) const;
  double box_height() const { return height_; }
  /// Expected box draws per accepted sample, 2 s height.
  double expected_iterations() const { return 2.0 * proposal_->range() * height_; }

 private:
  const Proposal* proposal_;
  double height_;
};

double sample_proposal(const Proposal& proposal, Rng& rng);

struct StepResult {
  double next = 0.0;
  bool accepted = false;
};

/// One transition from x with the move fixed to y = x + u; only the
/// accept/reject coin is random.
StepResult step_with_move(const MhKernel& kernel, double x, double u, Rng& rng);
/// One transition: v ~ Delta, y = x - v (so that q(x, y) = Delta(x - y)).
StepResult step(const MhKernel& kernel, const ProposalSampler& sampler, double x, Rng& rng);

struct ChainConfig {
  long steps = 100000;
  long burn_in = 1000;
  double x0 = 0.0;
  std::uint64_t seed = 1;
  int chains = 1;

  void validate() const;
};

struct ChainStats {
  std::uint64_t seed = 0;       // stream index seed (seed + chain index)
  long kept = 0;                // steps - burn_in
  long accepted = 0;
  double acceptance_rate = 0.0; // accepted / kept
  double acceptance_std_error = 0.0;  // batch-means standard error
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> ks_distance;  // built-in targets only
  std::vector<double> autocorrelation; // lags 0..min(100, kept - 1)
  bool proposal_range_ok = true;       // no move exceeded s
};

struct ChainSummary {
  std::vector<ChainStats> chains;
  ChainStats pooled;
};

/// Receives every post-burn-in state: (chain, step, x, accepted).
using TraceSink = std::function<void(int, long, double, bool)>;

ChainSummary run(const MhKernel& kernel, const ChainConfig& cfg, const TraceSink& trace = {});

/// Fraction of proposals from x that are rejected (fresh moves each trial).
double empirical_rejection(const MhKernel& kernel, double x, long trials, std::uint64_t seed);

/// sup_x |F_n(x) - F(x)|.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Sample autocorrelation for lags 0..max_lag.
std::vector<double> autocorrelation(const std::vector<double>& samples, int max_lag);

/// Standard error of the mean by non-overlapping batch means (square-root batch size).
double batch_means_std_error(const std::vector<double>& samples);

}  // namespace mhress
