#include "mhress/report.hpp"

#include <charconv>
#include <cmath>

namespace mhress {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out) {
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::sep() {
  if (!first_) out_ << ',';
  first_ = false;
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  out_ << format_number(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long v) {
  sep();
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out_.write(buf, res.ptr - buf);
  return *this;
}

CsvWriter& CsvWriter::cell(bool v) {
  sep();
  out_ << (v ? "true" : "false");
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& v) {
  sep();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json to_json(const BoundReport& r) {
  return {
      {"a", r.a},
      {"x_max", r.x_max},
      {"r_a", r.r_a},
      {"r_a_argmax", json_number(r.r_a_argmax)},
      {"r_prime_a", r.r_prime_a},
      {"r_prime_argmax", json_number(r.r_prime_argmax)},
      {"beta_a", r.beta_a},
      {"alpha_a", r.alpha_a},
      {"alpha_error", r.alpha_error},
      {"errors", {{"r_a", r.r_a_error}, {"r_prime_a", r.r_prime_error}, {"beta_a", r.beta_error}}},
      {"converged",
       {{"r_a", r.r_a_converged},
        {"r_prime_a", r.r_prime_converged},
        {"beta_a", r.beta_converged},
        {"tail_resolved", r.tail_resolved}}},
      {"certified", r.certified()},
      {"verdict", r.verdict()},
      {"warnings", r.warnings},
  };
}

json to_json(const BoundProfile& p) {
  json reports = json::array();
  for (const auto& r : p.reports) reports.push_back(to_json(r));
  return {{"reports", reports}, {"best_index", p.best}, {"best", to_json(p.best_report())}};
}

json to_json(const AsymptoticReport& r) {
  json tau = json::array();
  for (const auto& [u, t] : r.tau_samples) tau.push_back({{"u", u}, {"tau", t}});
  return {
      {"tau_mode", to_string(r.tau_mode)},
      {"tau", tau},
      {"x_max", r.x_max},
      {"r_compact", r.r_compact},
      {"r_compact_argmax", r.r_compact_argmax},
      {"r_inf", r.r_inf},
      {"r_prime_inf", r.r_prime_inf},
      {"beta_inf", r.beta_inf},
      {"gamma_inf", r.gamma_inf},
      {"alpha_inf", r.alpha_inf},
      {"identity_residual", r.identity_residual},
      {"degenerate", r.degenerate},
      {"even_verified", r.even_verified},
      {"positive_inside", r.positive_inside},
      {"hypotheses_verified", r.hypotheses_verified()},
      {"scan_converged", r.scan_converged},
      {"certified", r.certified()},
      {"verdict", r.verdict()},
      {"warnings", r.warnings},
  };
}

json to_json(const SpectralReport& r) {
  return {
      {"A", r.half_width},
      {"n", r.n},
      {"a", r.a},
      {"top_eigenvalue", r.top_eigenvalue},
      {"second_modulus", r.second_modulus},
      {"eigenvalues_near_one", r.eigenvalues_near_one},
      {"norm_T_ac", r.norm_T_ac},
      {"beta_a", r.beta_a},
      {"norm_within_beta", r.norm_within_beta},
      {"hs_norm_T_a", r.hs_norm_T_a},
      {"alpha_a", r.alpha_a},
      {"truncation_defect", r.truncation_defect},
      {"max_interior_row_defect", r.max_interior_row_defect},
      {"asymmetry", r.asymmetry},
      {"jacobi_sweeps", r.jacobi_sweeps},
      {"eigenvalues", r.eigenvalues},
      {"caveat", r.caveat},
  };
}

json to_json(const ChainStats& s) {
  json out = {
      {"seed", s.seed},
      {"kept", s.kept},
      {"accepted", s.accepted},
      {"acceptance_rate", s.acceptance_rate},
      {"acceptance_std_error", s.acceptance_std_error},
      {"mean", s.mean},
      {"variance", s.variance},
      {"autocorrelation", s.autocorrelation},
      {"proposal_range_ok", s.proposal_range_ok},
  };
  out["ks_distance"] = s.ks_distance ? json(*s.ks_distance) : json(nullptr);
  return out;
}

json to_json(const ChainSummary& s) {
  json chains = json::array();
  for (const auto& c : s.chains) chains.push_back(to_json(c));
  return {{"chains", chains}, {"pooled", to_json(s.pooled)}};
}

void write_bound_csv(std::ostream& out, const BoundProfile& p) {
  CsvWriter csv(out, {"a", "r_a", "r_prime_a", "beta_a", "alpha_a", "converged"});
  for (const auto& r : p.reports) {
    csv.cell(r.a).cell(r.r_a).cell(r.r_prime_a).cell(r.beta_a).cell(r.alpha_a).cell(r.converged());
    csv.end_row();
  }
}

void write_tau_csv(std::ostream& out, const AsymptoticReport& r) {
  CsvWriter csv(out, {"u", "tau"});
  for (const auto& [u, t] : r.tau_samples) {
    csv.cell(u).cell(t);
    csv.end_row();
  }
}

void write_eigenvalue_csv(std::ostream& out, const SpectralReport& r) {
  CsvWriter csv(out, {"index", "eigenvalue"});
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    csv.cell(static_cast<long>(i)).cell(r.eigenvalues[i]);
    csv.end_row();
  }
}

}  // namespace mhress
