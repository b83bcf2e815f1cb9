#include "mhress/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "mhress/errors.hpp"
#include "mhress/expr.hpp"

namespace mhress {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  // nlohmann reports the byte after the offending character.
  return {line, col > 1 ? col - 1 : col};
}

class Section {
 public:
  Section(const json& doc, std::string path, std::initializer_list<const char*> keys)
      : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError(where("") + " must be an object");
    for (const auto& [key, value] : doc_.items()) {
      (void)value;
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        throw ConfigError("unknown config key '" + where(key) + "'");
      }
    }
  }

  bool has(const char* key) const { return doc_.contains(key); }

  void get(const char* key, double& out) const {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + " must be a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(where(key) + " must be finite");
  }

  void get(const char* key, int& out) const {
    long wide = out;
    get(key, wide);
    if (wide > 2147483647L || wide < -2147483647L) throw ConfigError(where(key) + " is out of range");
    out = static_cast<int>(wide);
  }

  void get(const char* key, long& out) const {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + " must be an integer");
    out = v.get<long>();
  }

  void get(const char* key, std::uint64_t& out) const {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long>() < 0)) {
      throw ConfigError(where(key) + " must be a nonnegative integer");
    }
    out = v.get<std::uint64_t>();
  }

  void get(const char* key, std::string& out) const {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + " must be a string");
    out = v.get<std::string>();
  }

  void get(const char* key, std::vector<double>& out) const {
    if (!has(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + " must be an array of numbers");
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(where(key) + "[" + std::to_string(i) + "] must be a number");
      out.push_back(v[i].get<double>());
    }
  }

  Section child(const char* key, std::initializer_list<const char*> keys) const {
    static const json empty = json::object();
    return Section(has(key) ? doc_.at(key) : empty, where(key), keys);
  }

 private:
  std::string where(const std::string& key) const {
    if (path_.empty()) return key.empty() ? "config" : key;
    return key.empty() ? path_ : path_ + "." + key;
  }

  const json& doc_;
  std::string path_;
};

void require_positive(double v, const char* key) {
  if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be positive");
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError(origin + ": malformed JSON at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + what);
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects KEY=VAL, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  if (!doc.is_object()) doc = json::object();
  json* node = &doc;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ConfigError("--set key '" + key + "' has an empty component");
    path.push_back(part);
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    json& next = (*node)[path[i]];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError("--set key '" + key + "': '" + path[i] + "' is not a section");
    node = &next;
  }
  (*node)[path.back()] = value;
}

ConfigDoc config_from_json(const json& doc) {
  ConfigDoc c;
  const Section root(doc, "",
                     {"target", "proposal", "quadrature", "bound", "spectrum", "sample", "profile"});

  const Section target = root.child("target", {"family", "scale", "expr"});
  target.get("family", c.target.family);
  target.get("scale", c.target.scale);
  target.get("expr", c.target.expr);

  const Section proposal = root.child("proposal", {"family", "s", "expr"});
  proposal.get("family", c.proposal.family);
  proposal.get("s", c.proposal.s);
  proposal.get("expr", c.proposal.expr);

  const Section quad = root.child("quadrature", {"tol", "panels"});
  quad.get("tol", c.quadrature.tol);
  quad.get("panels", c.quadrature.panels);

  const Section bound = root.child("bound", {"a_list", "x_max", "scan_step"});
  bound.get("a_list", c.bound.a_list);
  bound.get("x_max", c.bound.x_max);
  bound.get("scan_step", c.bound.scan_step);

  const Section spectrum = root.child("spectrum", {"A", "n", "a"});
  spectrum.get("A", c.spectrum.A);
  spectrum.get("n", c.spectrum.n);
  spectrum.get("a", c.spectrum.a);

  const Section sample = root.child("sample", {"steps", "burn_in", "seed", "chains", "x0"});
  sample.get("steps", c.sample.steps);
  sample.get("burn_in", c.sample.burn_in);
  sample.get("seed", c.sample.seed);
  sample.get("chains", c.sample.chains);
  sample.get("x0", c.sample.x0);

  const Section profile = root.child("profile", {"lo", "hi", "step"});
  const bool explicit_lo = profile.has("lo");
  const bool explicit_hi = profile.has("hi");
  const bool explicit_step = profile.has("step");
  profile.get("lo", c.profile.lo);
  profile.get("hi", c.profile.hi);
  profile.get("step", c.profile.step);
  const double s = c.proposal.s;
  if (!explicit_lo) c.profile.lo = -5.0 * s;
  if (!explicit_hi) c.profile.hi = 5.0 * s;
  if (!explicit_step) c.profile.step = 0.01 * s;
  if (explicit_step) require_positive(c.profile.step, "profile.step");

  c.resolve();
  return c;
}

void ConfigDoc::resolve() {
  if (target.family != "laplace" && target.family != "gauss" && target.family != "expr") {
    throw ConfigError("target.family must be one of laplace, gauss, expr (got '" + target.family + "')");
  }
  if (proposal.family != "triangular" && proposal.family != "uniform" &&
      proposal.family != "epanechnikov" && proposal.family != "expr") {
    throw ConfigError("proposal.family must be one of triangular, uniform, epanechnikov, expr (got '" +
                      proposal.family + "')");
  }
  if (target.family == "expr" && target.expr.empty()) throw ConfigError("target.expr is required for family expr");
  if (proposal.family == "expr" && proposal.expr.empty()) {
    throw ConfigError("proposal.expr is required for family expr");
  }
  if (target.family != "expr" && !target.expr.empty()) {
    throw ConfigError("target.expr is only allowed with family expr");
  }
  if (proposal.family != "expr" && !proposal.expr.empty()) {
    throw ConfigError("proposal.expr is only allowed with family expr");
  }
  require_positive(target.scale, "target.scale");
  require_positive(proposal.s, "proposal.s");
  require_positive(quadrature.tol, "quadrature.tol");
  if (quadrature.panels < 2) throw ConfigError("quadrature.panels must be at least 2");

  const double s = proposal.s;
  if (bound.a_list.empty()) bound.a_list = default_a_list(s);
  for (std::size_t i = 0; i < bound.a_list.size(); ++i) {
    if (!(bound.a_list[i] > 0.0)) throw ConfigError("bound.a_list entries must be positive");
    if (i > 0 && !(bound.a_list[i] > bound.a_list[i - 1])) {
      throw ConfigError("bound.a_list must be strictly increasing");
    }
  }
  const double a_max = bound.a_list.back();
  if (bound.x_max == 0.0) bound.x_max = a_max + 50.0 * s;
  if (!(bound.x_max > a_max)) throw ConfigError("bound.x_max must exceed every entry of bound.a_list");
  if (bound.scan_step < 0.0) throw ConfigError("bound.scan_step must be nonnegative");

  if (spectrum.a == 0.0) spectrum.a = 5.0 * s;
  if (spectrum.A == 0.0) spectrum.A = a_max + 20.0 * s;
  require_positive(spectrum.a, "spectrum.a");
  if (!(spectrum.A > s)) throw ConfigError("spectrum.A must exceed proposal.s");
  if (!(spectrum.a < spectrum.A)) throw ConfigError("spectrum.a must be smaller than spectrum.A");
  if (spectrum.n < 3 || spectrum.n % 2 == 0) throw ConfigError("spectrum.n must be odd and at least 3");

  sample.validate();

  if (!(profile.step > 0.0)) throw ConfigError("profile.step must be positive");
  if (!(profile.hi >= profile.lo)) throw ConfigError("profile.hi must be at least profile.lo");
  if ((profile.hi - profile.lo) / profile.step > 1e7) throw ConfigError("profile grid exceeds 10^7 points");
}

json ConfigDoc::to_json() const {
  json t = {{"family", target.family}, {"scale", target.scale}};
  if (target.family == "expr") t["expr"] = target.expr;
  json p = {{"family", proposal.family}, {"s", proposal.s}};
  if (proposal.family == "expr") p["expr"] = proposal.expr;
  return {
      {"target", t},
      {"proposal", p},
      {"quadrature", {{"tol", quadrature.tol}, {"panels", quadrature.panels}}},
      {"bound", {{"a_list", bound.a_list}, {"x_max", bound.x_max}, {"scan_step", bound.scan_step}}},
      {"spectrum", {{"A", spectrum.A}, {"n", spectrum.n}, {"a", spectrum.a}}},
      {"sample",
       {{"steps", sample.steps},
        {"burn_in", sample.burn_in},
        {"seed", sample.seed},
        {"chains", sample.chains},
        {"x0", sample.x0}}},
      {"profile", {{"lo", profile.lo}, {"hi", profile.hi}, {"step", profile.step}}},
  };
}

Target ConfigDoc::make_target() const {
  if (target.family == "laplace") return Target::laplace(target.scale);
  if (target.family == "gauss") return Target::gauss(target.scale);
  return Target::from_expr(expr::parse(target.expr, "x"));
}

Proposal ConfigDoc::make_proposal() const {
  if (proposal.family == "triangular") return Proposal::triangular(proposal.s);
  if (proposal.family == "uniform") return Proposal::uniform(proposal.s);
  if (proposal.family == "epanechnikov") return Proposal::epanechnikov(proposal.s);
  return Proposal::from_expr(expr::parse(proposal.expr, "u"), proposal.s);
}

AdaptiveSimpson ConfigDoc::adaptive_rule() const { return {quadrature.tol, quadrature.tol, 40}; }

MhKernel ConfigDoc::make_kernel() const { return MhKernel(make_target(), make_proposal(), adaptive_rule()); }

BoundOptions ConfigDoc::bound_options() const {
  BoundOptions opts;
  opts.scan.step = bound.scan_step;
  opts.outer = adaptive_rule();
  return opts;
}

ConfigDoc load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (path) {
    std::ifstream in(*path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + *path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    doc = parse_json_text(buf.str(), *path);
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

}  // namespace mhress
