// Copyright 2026 The dlvn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Run configuration: a flat INI file with sections [system], [lead_L],
// [lead_R], [fermi], [quadrature] and [run]. Full-line comments start with
// '#' or ';'. Unknown keys are errors.

#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dlvn/analysis.hpp"
#include "dlvn/format.hpp"

namespace dlvn::cli {

inline constexpr double kDefaultRelTol = 1e-8;
inline constexpr const char* kRelTolEnv = "RJ_DEFAULT_TOL";

enum class RunMode { SinglePoint, Sweep, Convergence, Validate };

inline std::string_view to_string(RunMode m) {
  switch (m) {
    case RunMode::SinglePoint:
      return "current";
    case RunMode::Sweep:
      return "sweep";
    case RunMode::Convergence:
      return "converge";
    case RunMode::Validate:
      return "validate";
  }
  return "?";
}

/// Chain parameters or an explicit mode list, depending on the builder.
struct LeadConfig {
  ChainLeadSpec chain;
  std::vector<ReservoirMode> modes;
  friend bool operator==(const LeadConfig&, const LeadConfig&) = default;
};

struct RunConfig {
  JunctionBuilder builder = JunctionBuilder::SingleSite;
  double eps0 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  Complex h12 = 0.0;
  /// Raw builder only.
  Matrix hamiltonian;
  LeadConfig lead_L;
  LeadConfig lead_R;
  FermiParameters fermi;
  QuadratureConfig quadrature;

  RunMode mode = RunMode::SinglePoint;
  /// Empty with all_methods set means every applicable method.
  std::vector<CurrentMethod> methods;
  bool all_methods = false;
  SweepParameter sweep_parameter = SweepParameter::Gamma;
  std::vector<double> sweep_values;
  std::vector<int> converge_n;
  GammaRule gamma_rule = InverseSizeGamma{8.0};
  int random_junctions = 4;
  std::string output;
  bool debug_corrupt_hermiticity = false;

  JunctionTemplate junction_template() const {
    JunctionTemplate t;
    t.builder = builder;
    t.eps0 = eps0;
    t.eps1 = eps1;
    t.eps2 = eps2;
    t.h12 = h12;
    t.lead_L = lead_L.chain;
    t.lead_R = lead_R.chain;
    if (builder == JunctionBuilder::Raw) {
      t.raw = JunctionModel(SystemHamiltonian(hamiltonian), Lead(LeadLabel::L, lead_L.modes),
                            Lead(LeadLabel::R, lead_R.modes));
    }
    return t;
  }

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    const bool same_h = a.hamiltonian.rows() == b.hamiltonian.rows() && a.hamiltonian.cols() == b.hamiltonian.cols() &&
                        a.hamiltonian == b.hamiltonian;
    return a.builder == b.builder && a.eps0 == b.eps0 && a.eps1 == b.eps1 && a.eps2 == b.eps2 && a.h12 == b.h12 &&
           same_h && a.lead_L == b.lead_L && a.lead_R == b.lead_R && a.fermi == b.fermi &&
           a.quadrature == b.quadrature && a.mode == b.mode && a.methods == b.methods &&
           a.all_methods == b.all_methods && a.sweep_parameter == b.sweep_parameter &&
           a.sweep_values == b.sweep_values && a.converge_n == b.converge_n && a.gamma_rule == b.gamma_rule &&
           a.random_junctions == b.random_junctions && a.output == b.output &&
           a.debug_corrupt_hermiticity == b.debug_corrupt_hermiticity;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (in >> item) out.push_back(item);
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

/// Keys in file order per section; repeatable keys keep every occurrence.
class Document {
 public:
  static Document parse(const std::string& text) {
    static const std::vector<std::string> kSections = {"system", "lead_L", "lead_R", "fermi", "quadrature", "run"};
    Document doc;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const std::string s = trim(raw);
      if (s.empty() || s[0] == '#' || s[0] == ';') continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ParseError("malformed section header", line);
        section = trim(std::string_view(s).substr(1, s.size() - 2));
        if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
          throw ParseError("unknown section [" + section + "]", line);
        }
        if (doc.section_line_.count(section)) throw ParseError("duplicate section [" + section + "]", line);
        doc.section_line_[section] = line;
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError("expected key = value", line);
      if (section.empty()) throw ParseError("key outside any section", line);
      const std::string key = trim(std::string_view(s).substr(0, eq));
      const std::string value = trim(std::string_view(s).substr(eq + 1));
      if (key.empty()) throw ParseError("empty key", line);
      doc.entries_[section][key].push_back({value, line});
    }
    doc.last_line_ = line;
    return doc;
  }

  bool has(const std::string& section, const std::string& key) const {
    auto s = entries_.find(section);
    return s != entries_.end() && s->second.count(key);
  }

  /// Single-valued key; duplicates are a parse error.
  Entry* find(const std::string& section, const std::string& key) {
    auto s = entries_.find(section);
    if (s == entries_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    if (k->second.size() > 1) throw ParseError("duplicate key " + section + "." + key, k->second[1].line);
    k->second[0].used = true;
    return &k->second[0];
  }

  std::vector<Entry*> find_all(const std::string& section, const std::string& key) {
    std::vector<Entry*> out;
    auto s = entries_.find(section);
    if (s == entries_.end()) return out;
    auto k = s->second.find(key);
    if (k == s->second.end()) return out;
    for (auto& e : k->second) {
      e.used = true;
      out.push_back(&e);
    }
    return out;
  }

  int line_for_missing(const std::string& section) const {
    auto it = section_line_.find(section);
    return it != section_line_.end() ? it->second : last_line_;
  }

  void reject_unused() const {
    const Entry* first = nullptr;
    std::string name;
    for (const auto& [section, keys] : entries_)
      for (const auto& [key, list] : keys)
        for (const auto& e : list)
          if (!e.used && (!first || e.line < first->line)) {
            first = &e;
            name = section + "." + key;
          }
    if (first) throw ParseError("unknown key " + name, first->line);
  }

 private:
  std::map<std::string, std::map<std::string, std::vector<Entry>>> entries_;
  std::map<std::string, int> section_line_;
  int last_line_ = 0;
};

class Reader {
 public:
  explicit Reader(Document& doc) : doc_(doc) {}

  bool has(const std::string& section, const std::string& key) const { return doc_.has(section, key); }

  double real(const std::string& section, const std::string& key, std::optional<double> fallback = std::nullopt) {
    Entry* e = doc_.find(section, key);
    if (!e) return required(section, key, fallback);
    const auto v = parse_double(e->value);
    if (!v || !std::isfinite(*v)) throw ParseError(section + "." + key + ": expected a finite number", e->line);
    return *v;
  }

  /// A real that must be > 0 (or >= 0 when `allow_zero`).
  double positive(const std::string& section, const std::string& key, std::optional<double> fallback = std::nullopt,
                  bool allow_zero = false) {
    const double v = real(section, key, fallback);
    if (allow_zero ? !(v >= 0.0) : !(v > 0.0)) {
      throw ParseError(section + "." + key + (allow_zero ? " must be >= 0" : " must be > 0"), line_of(section, key));
    }
    return v;
  }

  long integer(const std::string& section, const std::string& key, std::optional<long> fallback = std::nullopt) {
    Entry* e = doc_.find(section, key);
    if (!e) {
      if (fallback) return *fallback;
      throw ParseError("missing required key " + section + "." + key, doc_.line_for_missing(section));
    }
    return parse_integer(e->value, section + "." + key, e->line);
  }

  bool boolean(const std::string& section, const std::string& key, bool fallback) {
    Entry* e = doc_.find(section, key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ParseError(section + "." + key + ": expected true or false", e->line);
  }

  std::optional<std::string> text(const std::string& section, const std::string& key) {
    Entry* e = doc_.find(section, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::vector<Entry*> all(const std::string& section, const std::string& key) { return doc_.find_all(section, key); }

  int line_of(const std::string& section, const std::string& key) {
    Entry* e = doc_.find(section, key);
    return e ? e->line : doc_.line_for_missing(section);
  }

  static long parse_integer(const std::string& text, const std::string& name, int line) {
    long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
      throw ParseError(name + ": expected an integer", line);
    }
    return v;
  }

  static double parse_real(const std::string& text, const std::string& name, int line) {
    const auto v = parse_double(text);
    if (!v || !std::isfinite(*v)) throw ParseError(name + ": expected a finite number", line);
    return *v;
  }

 private:
  double required(const std::string& section, const std::string& key, std::optional<double> fallback) {
    if (fallback) return *fallback;
    throw ParseError("missing required key " + section + "." + key, doc_.line_for_missing(section));
  }

  Document& doc_;
};

inline std::vector<CurrentMethod> parse_methods(const std::string& text, const std::string& name, int line,
                                                bool& all) {
  all = false;
  std::vector<CurrentMethod> out;
  for (const auto& item : split(text, ',')) {
    if (item == "all") {
      all = true;
      continue;
    }
    const auto m = method_from_string(item);
    if (!m) throw ParseError(name + ": unknown method '" + item + "'", line);
    if (std::find(out.begin(), out.end(), *m) != out.end()) throw ParseError(name + ": duplicate method", line);
    out.push_back(*m);
  }
  if (all && !out.empty()) throw ParseError(name + ": 'all' cannot be combined with named methods", line);
  if (!all && out.empty()) throw ParseError(name + ": no methods given", line);
  return out;
}

inline LeadConfig parse_lead(Reader& r, const std::string& section, JunctionBuilder builder, Index system_dim) {
  LeadConfig lead;
  if (builder != JunctionBuilder::Raw) {
    lead.chain.n_modes = static_cast<int>(r.integer(section, "N"));
    if (lead.chain.n_modes < 1) throw ParseError(section + ".N must be >= 1", r.line_of(section, "N"));
    lead.chain.t_hop = r.positive(section, "t_hop");
    lead.chain.v0 = Complex(r.real(section, "v0"), r.real(section, "v0_im", 0.0));
    const bool uniform = r.has(section, "gamma");
    const bool spacing = r.has(section, "gamma_spacing");
    if (uniform && spacing) {
      throw UsageError(section + ": gamma and gamma_spacing are mutually exclusive");
    }
    if (spacing) {
      lead.chain.gamma = SpacingProportionalGamma{r.positive(section, "gamma_spacing")};
    } else {
      lead.chain.gamma = UniformGamma{r.positive(section, "gamma")};
    }
    return lead;
  }
  // mode = omega gamma v_1re v_1im ... one line per mode.
  const auto entries = r.all(section, "mode");
  if (entries.empty()) throw ParseError("missing required key " + section + ".mode", r.line_of(section, "mode"));
  for (const Entry* e : entries) {
    const auto tok = split_ws(e->value);
    const std::string name = section + ".mode";
    if (tok.size() != static_cast<std::size_t>(2 + 2 * system_dim)) {
      throw ParseError(name + ": expected omega, gamma and " + std::to_string(system_dim) + " complex couplings",
                       e->line);
    }
    ReservoirMode m;
    m.omega = Reader::parse_real(tok[0], name, e->line);
    m.gamma = Reader::parse_real(tok[1], name, e->line);
    if (!(m.gamma > 0.0)) throw ParseError(name + ": gamma must be > 0", e->line);
    m.coupling = Vector(system_dim);
    for (Index i = 0; i < system_dim; ++i) {
      m.coupling(i) = Complex(Reader::parse_real(tok[2 + 2 * i], name, e->line),
                              Reader::parse_real(tok[3 + 2 * i], name, e->line));
    }
    lead.modes.push_back(std::move(m));
  }
  return lead;
}

inline Matrix parse_raw_hamiltonian(Reader& r) {
  const auto rows = r.all("system", "row");
  if (rows.empty()) throw ParseError("missing required key system.row", r.line_of("system", "row"));
  const Index n = static_cast<Index>(rows.size());
  Matrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto tok = split_ws(rows[i]->value);
    if (tok.size() != static_cast<std::size_t>(2 * n)) {
      throw ParseError("system.row: expected " + std::to_string(n) + " complex entries (re im pairs)", rows[i]->line);
    }
    for (Index j = 0; j < n; ++j) {
      h(i, j) = Complex(Reader::parse_real(tok[2 * j], "system.row", rows[i]->line),
                        Reader::parse_real(tok[2 * j + 1], "system.row", rows[i]->line));
    }
  }
  try {
    SystemHamiltonian check(h);
  } catch (const Error& e) {
    throw ParseError(std::string("system.row: ") + e.what(), rows.front()->line);
  }
  return h;
}

inline double env_rel_tol() {
  const char* env = std::getenv(kRelTolEnv);
  if (!env) return kDefaultRelTol;
  const auto v = parse_double(trim(env));
  if (!v || !(*v > 0.0) || !std::isfinite(*v)) {
    throw UsageError(std::string(kRelTolEnv) + " must be a positive number");
  }
  return *v;
}

}  // namespace detail

/// Parses and validates a configuration. rel_tol falls back to RJ_DEFAULT_TOL
/// and then to 1e-8 when the file does not set it.
inline RunConfig parse_config(const std::string& text) {
  using detail::Reader;
  detail::Document doc = detail::Document::parse(text);
  Reader r(doc);
  RunConfig c;

  const std::string builder = r.text("system", "builder").value_or("single_site");
  if (builder == "single_site") {
    c.builder = JunctionBuilder::SingleSite;
    c.eps0 = r.real("system", "eps0");
  } else if (builder == "two_site") {
    c.builder = JunctionBuilder::TwoSite;
    c.eps1 = r.real("system", "eps1");
    c.eps2 = r.real("system", "eps2");
    c.h12 = Complex(r.real("system", "h12"), r.real("system", "h12_im", 0.0));
  } else if (builder == "raw") {
    c.builder = JunctionBuilder::Raw;
    c.hamiltonian = detail::parse_raw_hamiltonian(r);
  } else {
    throw ParseError("system.builder: expected single_site, two_site or raw", r.line_of("system", "builder"));
  }
  const Index dim = c.builder == JunctionBuilder::Raw ? c.hamiltonian.rows()
                    : c.builder == JunctionBuilder::TwoSite ? 2
                                                            : 1;
  c.lead_L = detail::parse_lead(r, "lead_L", c.builder, dim);
  c.lead_R = detail::parse_lead(r, "lead_R", c.builder, dim);

  c.fermi.mu_L = r.real("fermi", "mu_L");
  c.fermi.mu_R = r.real("fermi", "mu_R");
  c.fermi.temperature = r.positive("fermi", "T", std::nullopt, true);

  c.quadrature.rel_tol = r.has("quadrature", "rel_tol") ? r.positive("quadrature", "rel_tol") : detail::env_rel_tol();
  c.quadrature.abs_tol = r.positive("quadrature", "abs_tol", QuadratureConfig{}.abs_tol, true);
  c.quadrature.window_pad = r.positive("quadrature", "window_pad", QuadratureConfig{}.window_pad);
  const long panels = r.integer("quadrature", "max_panels", QuadratureConfig{}.max_panels);
  if (panels < 1) throw ParseError("quadrature.max_panels must be >= 1", r.line_of("quadrature", "max_panels"));
  c.quadrature.max_panels = static_cast<int>(panels);
  c.quadrature.split_at_poles = r.boolean("quadrature", "split_at_poles", true);

  const bool single = r.has("run", "method");
  const bool sweep = r.has("run", "sweep") || r.has("run", "sweep_values") || r.has("run", "sweep_methods");
  const bool converge = r.has("run", "converge_N") || r.has("run", "gamma_rule") || r.has("run", "gamma_c");
  const bool validate = r.has("run", "validate");
  const int modes = int(single) + int(sweep) + int(converge) + int(validate);
  if (modes > 1) throw UsageError("config mixes run modes; use exactly one of method, sweep, converge_N, validate");
  if (modes == 0) throw UsageError("config sets no run mode; use one of method, sweep, converge_N, validate");

  if (single) {
    c.mode = RunMode::SinglePoint;
    c.methods = detail::parse_methods(*r.text("run", "method"), "run.method", r.line_of("run", "method"),
                                      c.all_methods);
  } else if (sweep) {
    c.mode = RunMode::Sweep;
    const std::string p = r.text("run", "sweep").value_or("");
    if (p == "gamma") c.sweep_parameter = SweepParameter::Gamma;
    else if (p == "N") c.sweep_parameter = SweepParameter::ReservoirSize;
    else if (p == "bias") c.sweep_parameter = SweepParameter::Bias;
    else throw ParseError("run.sweep: expected gamma, N or bias", r.line_of("run", "sweep"));
    const auto values = r.text("run", "sweep_values");
    if (!values) throw ParseError("missing required key run.sweep_values", r.line_of("run", "sweep"));
    const int line = r.line_of("run", "sweep_values");
    for (const auto& v : detail::split(*values, ',')) c.sweep_values.push_back(Reader::parse_real(v, "run.sweep_values", line));
    const auto methods = r.text("run", "sweep_methods");
    if (!methods) throw ParseError("missing required key run.sweep_methods", r.line_of("run", "sweep"));
    c.methods = detail::parse_methods(*methods, "run.sweep_methods", r.line_of("run", "sweep_methods"), c.all_methods);
  } else if (converge) {
    c.mode = RunMode::Convergence;
    const auto list = r.text("run", "converge_N");
    if (!list) throw ParseError("missing required key run.converge_N", r.line_of("run", "gamma_rule"));
    const int line = r.line_of("run", "converge_N");
    for (const auto& v : detail::split(*list, ',')) {
      const long n = Reader::parse_integer(v, "run.converge_N", line);
      if (n < 1 || n > 1000000) throw ParseError("run.converge_N: values must be in [1, 1e6]", line);
      c.converge_n.push_back(static_cast<int>(n));
    }
    const std::string rule = r.text("run", "gamma_rule").value_or("inverse_n");
    const double gc = r.positive("run", "gamma_c", 8.0);
    if (rule == "constant") c.gamma_rule = ConstantGamma{gc};
    else if (rule == "inverse_n") c.gamma_rule = InverseSizeGamma{gc};
    else if (rule == "spacing") c.gamma_rule = SpacingGamma{gc};
    else throw ParseError("run.gamma_rule: expected constant, inverse_n or spacing", r.line_of("run", "gamma_rule"));
  } else {
    c.mode = RunMode::Validate;
    if (!r.boolean("run", "validate", true)) throw UsageError("run.validate = false selects no run mode");
  }
  c.random_junctions = static_cast<int>(r.integer("run", "random_junctions", 4));
  if (c.random_junctions < 0) throw ParseError("run.random_junctions must be >= 0", r.line_of("run", "random_junctions"));
  c.output = r.text("run", "output").value_or("");
  c.debug_corrupt_hermiticity = r.boolean("run", "debug_corrupt_hermiticity", false);
  doc.reject_unused();

  try {
    c.fermi.validate();
    c.quadrature.validate();
    c.junction_template().build();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(std::string("invalid junction: ") + e.what());
  }
  return c;
}

namespace detail {

inline std::string join_methods(const RunConfig& c) {
  if (c.all_methods) return "all";
  std::string out;
  for (std::size_t i = 0; i < c.methods.size(); ++i) {
    if (i) out += ',';
    out += to_string(c.methods[i]);
  }
  return out;
}

inline void echo_lead(std::ostream& out, const char* name, const RunConfig& c, const LeadConfig& lead) {
  out << '[' << name << "]\n";
  if (c.builder == JunctionBuilder::Raw) {
    for (const auto& m : lead.modes) {
      out << "mode = " << format_double(m.omega) << ' ' << format_double(m.gamma);
      for (Index i = 0; i < m.coupling.size(); ++i) {
        out << ' ' << format_double(m.coupling(i).real()) << ' ' << format_double(m.coupling(i).imag());
      }
      out << '\n';
    }
    return;
  }
  out << "N = " << lead.chain.n_modes << '\n';
  out << "t_hop = " << format_double(lead.chain.t_hop) << '\n';
  out << "v0 = " << format_double(lead.chain.v0.real()) << '\n';
  out << "v0_im = " << format_double(lead.chain.v0.imag()) << '\n';
  if (const auto* u = std::get_if<UniformGamma>(&lead.chain.gamma)) {
    out << "gamma = " << format_double(u->gamma) << '\n';
  } else {
    out << "gamma_spacing = " << format_double(std::get<SpacingProportionalGamma>(lead.chain.gamma).factor) << '\n';
  }
}

}  // namespace detail

/// The resolved configuration, defaults included, as parseable INI text.
inline std::string echo_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[system]\n";
  switch (c.builder) {
    case JunctionBuilder::SingleSite:
      out << "builder = single_site\neps0 = " << format_double(c.eps0) << '\n';
      break;
    case JunctionBuilder::TwoSite:
      out << "builder = two_site\neps1 = " << format_double(c.eps1) << "\neps2 = " << format_double(c.eps2)
          << "\nh12 = " << format_double(c.h12.real()) << "\nh12_im = " << format_double(c.h12.imag()) << '\n';
      break;
    case JunctionBuilder::Raw:
      out << "builder = raw\n";
      for (Index i = 0; i < c.hamiltonian.rows(); ++i) {
        out << "row =";
        for (Index j = 0; j < c.hamiltonian.cols(); ++j) {
          out << ' ' << format_double(c.hamiltonian(i, j).real()) << ' ' << format_double(c.hamiltonian(i, j).imag());
        }
        out << '\n';
      }
      break;
  }
  detail::echo_lead(out, "lead_L", c, c.lead_L);
  detail::echo_lead(out, "lead_R", c, c.lead_R);
  out << "[fermi]\nmu_L = " << format_double(c.fermi.mu_L) << "\nmu_R = " << format_double(c.fermi.mu_R)
      << "\nT = " << format_double(c.fermi.temperature) << '\n';
  out << "[quadrature]\nrel_tol = " << format_double(c.quadrature.rel_tol)
      << "\nabs_tol = " << format_double(c.quadrature.abs_tol)
      << "\nwindow_pad = " << format_double(c.quadrature.window_pad)
      << "\nmax_panels = " << c.quadrature.max_panels
      << "\nsplit_at_poles = " << (c.quadrature.split_at_poles ? "true" : "false") << '\n';
  out << "[run]\n";
  switch (c.mode) {
    case RunMode::SinglePoint:
      out << "method = " << detail::join_methods(c) << '\n';
      break;
    case RunMode::Sweep: {
      out << "sweep = " << to_string(c.sweep_parameter) << "\nsweep_values = ";
      for (std::size_t i = 0; i < c.sweep_values.size(); ++i) out << (i ? "," : "") << format_double(c.sweep_values[i]);
      out << "\nsweep_methods = " << detail::join_methods(c) << '\n';
      break;
    }
    case RunMode::Convergence: {
      out << "converge_N = ";
      for (std::size_t i = 0; i < c.converge_n.size(); ++i) out << (i ? "," : "") << c.converge_n[i];
      if (const auto* g = std::get_if<ConstantGamma>(&c.gamma_rule)) {
        out << "\ngamma_rule = constant\ngamma_c = " << format_double(g->gamma);
      } else if (const auto* g = std::get_if<InverseSizeGamma>(&c.gamma_rule)) {
        out << "\ngamma_rule = inverse_n\ngamma_c = " << format_double(g->c);
      } else {
        out << "\ngamma_rule = spacing\ngamma_c = " << format_double(std::get<SpacingGamma>(c.gamma_rule).c);
      }
      out << '\n';
      break;
    }
    case RunMode::Validate:
      out << "validate = true\n";
      break;
  }
  out << "random_junctions = " << c.random_junctions << '\n';
  if (!c.output.empty()) out << "output = " << c.output << '\n';
  out << "debug_corrupt_hermiticity = " << (c.debug_corrupt_hermiticity ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace dlvn::cli
