#include "mhress/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <locale>
#include <stdexcept>

#include <json.hpp>

#include "mhress/config.hpp"
#include "mhress/errors.hpp"
#include "mhress/report.hpp"

#ifndef MHRESS_VERSION
#define MHRESS_VERSION "0.0.0"
#endif

namespace mhress {

using nlohmann::json;

namespace {

struct Outcome {
  json result;
  std::vector<std::string> warnings;
  int code = kExitOk;
};

class Artifacts {
 public:
  explicit Artifacts(const CommandOptions& opts) : dir_(opts.out_dir), format_(opts.format) {
    std::filesystem::create_directories(dir_);
  }
  bool csv() const { return format_ == "csv" || format_ == "both"; }
  bool json_enabled() const { return format_ == "json" || format_ == "both"; }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    body(out);
    if (!out) throw std::runtime_error("write failed for " + path.string());
    written_.push_back(path.string());
  }
  const std::vector<std::string>& written() const { return written_; }

 private:
  std::filesystem::path dir_;
  std::string format_;
  std::vector<std::string> written_;
};

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
  for (const auto& w : from) {
    if (std::find(to.begin(), to.end(), w) == to.end()) to.push_back(w);
  }
}

std::optional<AsymptoticReport> try_alpha_inf(const MhKernel& kernel, const TailModel& tails,
                                              double x_max, const SupScan& scan,
                                              std::vector<std::string>& warnings) {
  try {
    return alpha_inf(kernel, tails.right, x_max, scan);
  } catch (const HypothesisError& e) {
    warnings.push_back(std::string("alpha_inf unavailable: ") + e.what());
    return std::nullopt;
  }
}

double expected_acceptance(const MhKernel& kernel) {
  const Target& target = kernel.target();
  const double width = target.family() == TargetFamily::kLaplace ? 40.0 * target.scale() : 12.0 * target.scale();
  const double s = kernel.range();
  auto f = [&](double x) { return (1.0 - kernel.rejection_prob(x)) * target.density(x); };
  const std::vector<double> bps = {-s, 0.0, s};
  return integrate(f, -width, width, AdaptiveSimpson{1e-10, 1e-9, 30}, bps).value;
}

Outcome cmd_bound(const ConfigDoc& cfg, Artifacts& files) {
  const MhKernel kernel = cfg.make_kernel();
  const TailModel tails = make_tail_model(kernel.target(), kernel.range());
  const BoundOptions opts = cfg.bound_options();
  const BoundProfile profile = bound_profile(kernel, cfg.bound.a_list, cfg.bound.x_max, tails, opts);

  Outcome o;
  for (const auto& r : profile.reports) append(o.warnings, r.warnings);
  const auto asym = try_alpha_inf(kernel, tails, cfg.bound.x_max, opts.scan, o.warnings);
  o.result = to_json(profile);
  o.result["alpha_inf"] = asym ? json(asym->alpha_inf) : json(nullptr);
  o.result["gamma_inf"] = asym ? json(asym->gamma_inf) : json(nullptr);
  const BoundReport& best = profile.best_report();
  const bool all_converged = std::all_of(profile.reports.begin(), profile.reports.end(),
                                         [](const BoundReport& r) { return r.converged(); });
  o.result["verdict"] = best.verdict();
  o.code = (all_converged && best.certified()) ? kExitOk : kExitNotCertified;
  if (files.csv()) files.write("bound.csv", [&](std::ostream& s) { write_bound_csv(s, profile); });
  return o;
}

Outcome cmd_asymptotic(const ConfigDoc& cfg, Artifacts& files) {
  const MhKernel kernel = cfg.make_kernel();
  const TailModel tails = make_tail_model(kernel.target(), kernel.range());
  SupScan scan;
  scan.step = cfg.bound.scan_step;
  Outcome o;
  const AsymptoticReport right = alpha_inf(kernel, tails.right, cfg.bound.x_max, scan);
  append(o.warnings, right.warnings);
  o.result = to_json(right);
  bool certified = right.certified();
  if (!right.even_verified && tails.left.available()) {
    const AsymptoticReport left = alpha_inf(kernel, tails.left, cfg.bound.x_max, scan);
    o.result["left_tail"] = to_json(left);
    o.result["alpha_inf"] = std::max(right.alpha_inf, left.alpha_inf);
    certified = certified && left.certified();
    append(o.warnings, left.warnings);
  }
  o.code = certified ? kExitOk : kExitNotCertified;
  if (files.csv()) files.write("tau.csv", [&](std::ostream& s) { write_tau_csv(s, right); });
  return o;
}

Outcome cmd_profile(const ConfigDoc& cfg, Artifacts& files) {
  const MhKernel kernel = cfg.make_kernel();
  const auto& p = cfg.profile;
  const long rows = std::lround(std::floor((p.hi - p.lo) / p.step + 1e-9)) + 1;
  std::vector<double> xs(rows);
  std::vector<double> rs(rows);
  long unconverged = 0;
  long clamped = 0;
  for (long i = 0; i < rows; ++i) {
    xs[i] = p.lo + static_cast<double>(i) * p.step;
    const Rejection rej = kernel.rejection(xs[i]);
    rs[i] = rej.value;
    if (!rej.converged) ++unconverged;
    if (rej.clamped) ++clamped;
  }
  Outcome o;
  const auto peak = std::max_element(rs.begin(), rs.end()) - rs.begin();
  o.result = {{"rows", rows},
              {"argmax", xs[peak]},
              {"max", rs[peak]},
              {"unconverged_points", unconverged},
              {"clamped_points", clamped}};
  if (clamped > 0) o.warnings.push_back("rejection quadrature left [0, 1] at some grid points and was clamped");
  append(o.warnings, kernel.proposal().warnings());
  if (files.csv()) {
    files.write("profile.csv", [&](std::ostream& s) {
      CsvWriter csv(s, {"x", "r_x"});
      for (long i = 0; i < rows; ++i) {
        csv.cell(xs[i]).cell(rs[i]);
        csv.end_row();
      }
    });
  }
  return o;
}

Outcome cmd_spectrum(const ConfigDoc& cfg, Artifacts& files) {
  const MhKernel kernel = cfg.make_kernel();
  const TailModel tails = make_tail_model(kernel.target(), kernel.range());
  const double a = cfg.spectrum.a;
  const BoundReport bound = alpha(kernel, a, default_x_max(kernel, a), tails, cfg.bound_options());
  const Discretization d = Discretization::uniform(kernel.target(), cfg.spectrum.A, cfg.spectrum.n);
  const SpectralReport rep = spectral_report(kernel, d, a, bound.beta_a, bound.alpha_a);
  Outcome o;
  o.result = to_json(rep);
  if (!d.valid()) {
    o.warnings.push_back("TruncationDefect: target mass outside [-A, A] is " +
                         format_number(d.truncation_defect) + " (>= 1e-6)");
  }
  if (d.spacing() > kernel.range()) o.warnings.push_back("grid spacing exceeds the proposal range");
  o.warnings.push_back(kSpectralCaveat);
  if (files.csv()) files.write("eigenvalues.csv", [&](std::ostream& s) { write_eigenvalue_csv(s, rep); });
  return o;
}

Outcome cmd_sample(const ConfigDoc& cfg, Artifacts& files, const std::optional<std::string>& trace_path) {
  const MhKernel kernel = cfg.make_kernel();
  std::ofstream trace_file;
  TraceSink sink;
  Outcome o;
  if (trace_path) {
    trace_file.open(*trace_path, std::ios::binary);
    if (!trace_file) throw ConfigError("cannot open trace file '" + *trace_path + "'");
    trace_file.imbue(std::locale::classic());
    trace_file << "step,x,accepted\n";
    sink = [&trace_file](int chain, long step, double x, bool accepted) {
      if (chain != 0) return;
      trace_file << step << ',' << format_number(x) << ',' << (accepted ? 1 : 0) << '\n';
    };
    if (cfg.sample.chains > 1) o.warnings.push_back("trace file holds chain 0 only");
  }
  const ChainSummary summary = run(kernel, cfg.sample, sink);
  o.result = to_json(summary);
  if (kernel.target().is_builtin()) o.result["stationary_acceptance_rate"] = expected_acceptance(kernel);
  append(o.warnings, kernel.proposal().warnings());
  if (files.csv()) {
    files.write("sample.csv", [&](std::ostream& s) {
      CsvWriter csv(s, {"chain", "seed", "kept", "accepted", "acceptance_rate", "mean", "variance", "ks_distance"});
      for (std::size_t c = 0; c < summary.chains.size(); ++c) {
        const ChainStats& st = summary.chains[c];
        csv.cell(static_cast<long>(c)).cell(std::to_string(st.seed)).cell(st.kept).cell(st.accepted);
        csv.cell(st.acceptance_rate).cell(st.mean).cell(st.variance);
        if (st.ks_distance) {
          csv.cell(*st.ks_distance);
        } else {
          csv.cell(std::string());
        }
        csv.end_row();
      }
    });
  }
  return o;
}

}  // namespace

const char* tool_version() { return MHRESS_VERSION; }

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"bound", "asymptotic", "profile", "spectrum", "sample"};
  return names;
}

int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), opts.command) == names.end()) {
    err << "error: unknown command '" << opts.command << "'\n";
    return kExitConfig;
  }
  if (opts.format != "csv" && opts.format != "json" && opts.format != "both") {
    err << "error: --format must be csv, json or both\n";
    return kExitConfig;
  }
  const auto start = std::chrono::steady_clock::now();
  try {
    const ConfigDoc cfg = load_config(opts.config_path, opts.overrides);
    Artifacts files(opts);
    Outcome o;
    if (opts.command == "bound") o = cmd_bound(cfg, files);
    else if (opts.command == "asymptotic") o = cmd_asymptotic(cfg, files);
    else if (opts.command == "profile") o = cmd_profile(cfg, files);
    else if (opts.command == "spectrum") o = cmd_spectrum(cfg, files);
    else o = cmd_sample(cfg, files, opts.trace_path);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (files.json_enabled()) {
      const json doc = {
          {"tool", "mhress"},
          {"version", tool_version()},
          {"command", opts.command},
          {"config", cfg.to_json()},
          {"result", o.result},
          {"warnings", o.warnings},
          {"exit_code", o.code},
          {"duration_s", seconds},
      };
      files.write(opts.command + ".json", [&](std::ostream& s) { s << doc.dump(2) << '\n'; });
    }
    for (const auto& w : o.warnings) err << "warning: " << w << '\n';
    if (o.result.contains("verdict")) out << opts.command << ": " << o.result["verdict"].get<std::string>() << '\n';
    for (const auto& path : files.written()) out << "wrote " << path << '\n';
    return o.code;
  } catch (const HypothesisError& e) {
    err << "not certified: " << e.what() << '\n';
    return kExitNotCertified;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SyntaxError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnknownIdentifier& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace mhress
