#pragma once

// JSON experiment documents. Every key has a default; the resolved document
// (defaults filled in) is echoed into each report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhress/bounds.hpp"
#include "mhress/kernel.hpp"
#include "mhress/sampler.hpp"

namespace mhress {

struct TargetConfig {
  std::string family = "laplace";  // laplace | gauss | expr
  double scale = 1.0;
  std::string expr;                // density in x, family "expr" only
};

struct ProposalConfig {
  std::string family = "triangular";  // triangular | uniform | epanechnikov | expr
  double s = 1.0;
  std::string expr;                   // shape in u, family "expr" only
};

struct QuadratureConfig {
  double tol = 1e-10;  // adaptive Simpson abs and rel tolerance
  int panels = 64;     // composite Gauss-Legendre panels
};

struct BoundConfig {
  std::vector<double> a_list;  // default {1, 2, 4, 8, 16} * s
  double x_max = 0.0;          // default max(a_list) + 50 s
  double scan_step = 0.0;      // 0: 2048 coarse intervals per scan
};

struct SpectrumConfig {
  double A = 0.0;  // default max(a_list) + 20 s
  int n = 801;
  double a = 0.0;  // default 5 s
};

struct ProfileConfig {
  double lo = 0.0;    // default -5 s
  double hi = 0.0;    // default 5 s
  double step = 0.0;  // default 0.01 s
};

struct ConfigDoc {
  TargetConfig target;
  ProposalConfig proposal;
  QuadratureConfig quadrature;
  BoundConfig bound;
  SpectrumConfig spectrum;
  ChainConfig sample;
  ProfileConfig profile;

  /// Fills every data-dependent default; idempotent.
  void resolve();
  nlohmann::json to_json() const;

  Target make_target() const;
  Proposal make_proposal() const;
  MhKernel make_kernel() const;
  AdaptiveSimpson adaptive_rule() const;
  GaussLegendre gauss_legendre_rule() const { return {16, quadrature.panels}; }
  BoundOptions bound_options() const;
};

/// Parses JSON text; ConfigError carries "line L, column C" for syntax errors.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin = "config");

/// Applies KEY=VAL (dotted key path; VAL as JSON, else as a string).
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates against the known schema (unknown keys and wrong types raise
/// ConfigError naming the key path) and resolves defaults.
ConfigDoc config_from_json(const nlohmann::json& doc);

ConfigDoc load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides);

}  // namespace mhress
