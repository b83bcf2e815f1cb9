#pragma once

// JSON and CSV serialization of the computed reports. CSV numbers are written
// with std::to_chars (shortest round-trip form, '.' decimal point, no
// grouping), so files are identical under every locale.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhress/asymptotics.hpp"
#include "mhress/bounds.hpp"
#include "mhress/sampler.hpp"
#include "mhress/spectra.hpp"

namespace mhress {

/// Shortest decimal form that round-trips; "inf", "-inf", "nan" otherwise.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& cell(double v);
  CsvWriter& cell(long v);
  CsvWriter& cell(int v) { return cell(static_cast<long>(v)); }
  CsvWriter& cell(bool v);
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  bool first_ = true;
};

/// JSON numbers cannot be infinite; those are written as strings.
nlohmann::json json_number(double v);

nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const BoundProfile& p);
nlohmann::json to_json(const AsymptoticReport& r);
nlohmann::json to_json(const SpectralReport& r);
nlohmann::json to_json(const ChainStats& s);
nlohmann::json to_json(const ChainSummary& s);

void write_bound_csv(std::ostream& out, const BoundProfile& p);
void write_tau_csv(std::ostream& out, const AsymptoticReport& r);
void write_eigenvalue_csv(std::ostream& out, const SpectralReport& r);

}  // namespace mhress
