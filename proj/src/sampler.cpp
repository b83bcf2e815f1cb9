#include "mhress/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mhress/errors.hpp"

namespace mhress {

namespace {

constexpr long kMaxBoxDraws = 1000000;
constexpr int kMaxLag = 100;

struct ChainTrace {
  std::vector<double> xs;
  std::vector<char> accepted;
  bool range_ok = true;
};

ChainTrace simulate(const MhKernel& kernel, const ProposalSampler& sampler, const ChainConfig& cfg,
                    std::uint64_t stream_seed) {
  Rng rng(stream_seed);
  ChainTrace out;
  const long kept = cfg.steps - cfg.burn_in;
  out.xs.reserve(static_cast<std::size_t>(kept));
  out.accepted.reserve(static_cast<std::size_t>(kept));
  const double s = kernel.range();
  double x = cfg.x0;
  for (long i = 0; i < cfg.steps; ++i) {
    const double prev = x;
    const StepResult r = step(kernel, sampler, x, rng);
    x = r.next;
    if (std::abs(x - prev) > s) out.range_ok = false;
    if (i >= cfg.burn_in) {
      out.xs.push_back(x);
      out.accepted.push_back(r.accepted ? 1 : 0);
    }
  }
  return out;
}

void moments(const std::vector<double>& v, double& mean, double& var) {
  const double n = static_cast<double>(v.size());
  mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  var = v.size() > 1 ? ss / (n - 1.0) : 0.0;
}

ChainStats summarize(const MhKernel& kernel, const ChainTrace& tr, std::uint64_t stream_seed) {
  ChainStats st;
  st.seed = stream_seed;
  st.kept = static_cast<long>(tr.xs.size());
  st.accepted = std::count(tr.accepted.begin(), tr.accepted.end(), 1);
  st.acceptance_rate = static_cast<double>(st.accepted) / static_cast<double>(st.kept);
  std::vector<double> ind(tr.accepted.begin(), tr.accepted.end());
  st.acceptance_std_error = batch_means_std_error(ind);
  moments(tr.xs, st.mean, st.variance);
  if (kernel.target().is_builtin()) {
    const Target& target = kernel.target();
    st.ks_distance = ks_distance(tr.xs, [&target](double x) { return *target.cdf(x); });
  }
  st.autocorrelation = autocorrelation(tr.xs, static_cast<int>(std::min<long>(kMaxLag, st.kept - 1)));
  st.proposal_range_ok = tr.range_ok;
  return st;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ProposalSampler::ProposalSampler(const Proposal& proposal, std::optional<double> declared_sup)
    : proposal_(&proposal) {
  // Small pad so a scan that lands just below a smooth peak still dominates.
  const double scanned = proposal.shape_sup() * (1.0 + 1e-9);
  if (declared_sup) {
    if (!(*declared_sup >= proposal.shape_sup())) {
      throw ConfigError("declared sup of Delta (" + std::to_string(*declared_sup) +
                        ") is below the scanned sup (" + std::to_string(proposal.shape_sup()) +
                        "); the sampling box must dominate the density");
    }
    height_ = *declared_sup;
  } else {
    height_ = scanned;
  }
}

double ProposalSampler::operator()(Rng& rng) const {
  const double s = proposal_->range();
  for (long i = 0; i < kMaxBoxDraws; ++i) {
    const double v = rng.uniform(-s, s);
    const double h = rng.uniform() * height_;
    if (h < proposal_->shape(v)) return v;
  }
  throw NumericalError("proposal rejection sampler hit " + std::to_string(kMaxBoxDraws) +
                       " box draws without acceptance (expected " +
                       std::to_string(expected_iterations()) + ")");
}

double sample_proposal(const Proposal& proposal, Rng& rng) { return ProposalSampler(proposal)(rng); }

StepResult step_with_move(const MhKernel& kernel, double x, double u, Rng& rng) {
  const double y = x + u;
  const double log_a = kernel.log_acceptance_ratio(x, y);
  const double coin = rng.uniform();
  if (log_a >= 0.0 || std::log(coin) < log_a) return {y, true};
  return {x, false};
}

StepResult step(const MhKernel& kernel, const ProposalSampler& sampler, double x, Rng& rng) {
  const double v = sampler(rng);
  return step_with_move(kernel, x, -v, rng);
}

void ChainConfig::validate() const {
  if (steps <= 0) throw ConfigError("sample.steps must be positive");
  if (burn_in < 0) throw ConfigError("sample.burn_in must be nonnegative");
  if (burn_in >= steps) throw ConfigError("sample.burn_in must be smaller than sample.steps");
  if (chains <= 0) throw ConfigError("sample.chains must be positive");
  if (!std::isfinite(x0)) throw ConfigError("sample.x0 must be finite");
}

ChainSummary run(const MhKernel& kernel, const ChainConfig& cfg, const TraceSink& trace) {
  cfg.validate();
  const ProposalSampler sampler(kernel.proposal());
  std::vector<std::future<ChainTrace>> jobs;
  for (int c = 0; c < cfg.chains; ++c) {
    const std::uint64_t stream = cfg.seed + static_cast<std::uint64_t>(c);
    jobs.push_back(std::async(std::launch::async, [&kernel, &sampler, &cfg, stream] {
      return simulate(kernel, sampler, cfg, stream);
    }));
  }
  std::vector<ChainTrace> traces;
  for (auto& j : jobs) traces.push_back(j.get());

  ChainSummary out;
  std::vector<double> all_x;
  long total_accepted = 0;
  long total_kept = 0;
  double var_sum = 0.0;
  for (int c = 0; c < cfg.chains; ++c) {
    const ChainTrace& tr = traces[c];
    if (trace) {
      for (std::size_t i = 0; i < tr.xs.size(); ++i) {
        trace(c, cfg.burn_in + static_cast<long>(i) + 1, tr.xs[i], tr.accepted[i] != 0);
      }
    }
    out.chains.push_back(summarize(kernel, tr, cfg.seed + static_cast<std::uint64_t>(c)));
    const ChainStats& st = out.chains.back();
    total_accepted += st.accepted;
    total_kept += st.kept;
    var_sum += std::pow(st.acceptance_std_error * static_cast<double>(st.kept), 2);
    all_x.insert(all_x.end(), tr.xs.begin(), tr.xs.end());
  }

  ChainStats& p = out.pooled;
  p.seed = cfg.seed;
  p.kept = total_kept;
  p.accepted = total_accepted;
  p.acceptance_rate = static_cast<double>(total_accepted) / static_cast<double>(total_kept);
  p.acceptance_std_error = std::sqrt(var_sum) / static_cast<double>(total_kept);
  moments(all_x, p.mean, p.variance);
  if (kernel.target().is_builtin()) {
    const Target& target = kernel.target();
    p.ks_distance = ks_distance(all_x, [&target](double x) { return *target.cdf(x); });
  }
  const std::size_t lags = out.chains.front().autocorrelation.size();
  p.autocorrelation.assign(lags, 0.0);
  for (const ChainStats& st : out.chains) {
    for (std::size_t k = 0; k < lags; ++k) {
      p.autocorrelation[k] += st.autocorrelation[k] * static_cast<double>(st.kept) / total_kept;
    }
  }
  p.proposal_range_ok = std::all_of(out.chains.begin(), out.chains.end(),
                                    [](const ChainStats& st) { return st.proposal_range_ok; });
  return out;
}

double empirical_rejection(const MhKernel& kernel, double x, long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  const ProposalSampler sampler(kernel.proposal());
  Rng rng(seed);
  long rejected = 0;
  for (long i = 0; i < trials; ++i) {
    if (!step(kernel, sampler, x, rng).accepted) ++rejected;
  }
  return static_cast<double>(rejected) / static_cast<double>(trials);
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_distance needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

std::vector<double> autocorrelation(const std::vector<double>& samples, int max_lag) {
  const std::size_t n = samples.size();
  if (n == 0 || max_lag < 0) return {};
  const std::size_t lags = std::min<std::size_t>(static_cast<std::size_t>(max_lag), n - 1);
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  std::vector<double> c(samples.size());
  for (std::size_t i = 0; i < n; ++i) c[i] = samples[i] - mean;
  double c0 = 0.0;
  for (double v : c) c0 += v * v;
  std::vector<double> out(lags + 1, 0.0);
  out[0] = 1.0;
  if (c0 == 0.0) return out;
  for (std::size_t k = 1; k <= lags; ++k) {
    double ck = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) ck += c[i] * c[i + k];
    out[k] = ck / c0;
  }
  return out;
}

double batch_means_std_error(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  const std::size_t size = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
  const std::size_t batches = n / size;
  if (batches < 2) return 0.0;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    double sum = 0.0;
    for (std::size_t i = b * size; i < (b + 1) * size; ++i) sum += samples[i];
    means[b] = sum / static_cast<double>(size);
  }
  double m = 0.0;
  double v = 0.0;
  moments(means, m, v);
  return std::sqrt(v / static_cast<double>(batches));
}

}  // namespace mhress
