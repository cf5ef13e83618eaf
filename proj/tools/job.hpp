// Copyright 2026 The funcprep Authors
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

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "funcprep/bounds.hpp"
#include "funcprep/lcu.hpp"
#include "funcprep/piecewise.hpp"
#include "funcprep/primitives.hpp"
#include "funcprep/qasm.hpp"
#include "funcprep/series.hpp"
#include "funcprep/simulator.hpp"
#include "json.hpp"

namespace funcprep::cli {

using json = nlohmann::ordered_json;

// Reals at 17 significant digits, integers verbatim, insertion order kept.
inline void write_json(std::ostream& os, const json& j, int indent = 0) {
  const std::string pad(indent, ' '), inner(indent + 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        os << inner << json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 2);
        os << (i + 1 < j.size() ? ",\n" : "\n");
      }
      os << pad << "}";
      return;
    }
    case json::value_t::array: {
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], 0);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << inner;
        write_json(os, j[i], indent + 2);
        os << (i + 1 < j.size() ? ",\n" : "\n");
      }
      os << pad << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string s = buf;
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      os << s;
      return;
    }
    default:
      os << j.dump();
  }
}

inline std::string to_text(const json& j) {
  std::ostringstream os;
  write_json(os, j);
  os << "\n";
  return os.str();
}

struct FunctionSection {
  std::string name = "custom";
  double epsilon = 0.0;
  SeriesParams params;
  std::vector<double> re, im;
  Basis basis = Basis::Monomial;
  bool named() const { return name != "custom"; }
};

struct JobSpec {
  int n = 0;
  double a = 0.0, b = 0.0;
  std::optional<FunctionSection> function;
  std::vector<FunctionSection> pieces;
  std::vector<double> breakpoints;
  double delta_phases = 1e-10;
  unsigned seed = 7;
  OracleMode mode = OracleMode::Sharing;
};

namespace detail {

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::string tok;
  std::istringstream is(s);
  while (is >> tok) {
    for (char& c : tok)
      if (c == ',') c = ' ';
    std::istringstream ts(tok);
    std::string part;
    while (ts >> part) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(part, &used);
      } catch (const std::exception&) {
        throw DomainError("not a number: " + part);
      }
      if (used != part.size() || !std::isfinite(x)) throw DomainError("not a finite number: " + part);
      v.push_back(x);
    }
  }
  return v;
}

inline double get_real(const boost::property_tree::ptree& t, const std::string& key, std::optional<double> dflt = {}) {
  auto v = t.get_optional<std::string>(key);
  if (!v) {
    if (dflt) return *dflt;
    throw DomainError("missing key: " + key);
  }
  auto xs = parse_list(*v);
  if (xs.size() != 1) throw DomainError("expected one number for " + key);
  return xs[0];
}

inline FunctionSection read_function(const boost::property_tree::ptree& t) {
  FunctionSection f;
  f.name = t.get<std::string>("name", "custom");
  f.epsilon = get_real(t, "epsilon", 0.0);
  f.params.t = get_real(t, "t", 1.0);
  f.params.sigma = get_real(t, "sigma", 1.0);
  f.params.delta = get_real(t, "delta", 2.0);
  f.params.order = static_cast<int>(get_real(t, "order", 0.0));
  f.params.scale = get_real(t, "scale", 1.0);
  f.params.slope = get_real(t, "slope", 0.01);
  if (auto re = t.get_optional<std::string>("coeffs_re")) f.re = parse_list(*re);
  if (auto im = t.get_optional<std::string>("coeffs_im")) f.im = parse_list(*im);
  const std::string basis = t.get<std::string>("basis", "monomial");
  if (basis == "chebyshev") f.basis = Basis::Chebyshev;
  else if (basis != "monomial") throw DomainError("basis must be monomial or chebyshev");
  if (f.named() && (!f.re.empty() || !f.im.empty())) throw DomainError("give either a name or coefficients, not both");
  if (!f.named() && f.re.empty() && f.im.empty()) throw DomainError("function needs a name or coefficients");
  if (f.named() && !is_piecewise_row(f.name)) {
    series_row(f.name);
    if (!(f.epsilon > 0)) throw DomainError("named functions need epsilon > 0");
  }
  return f;
}

inline FunctionSection function_from_json(const json& j) {
  FunctionSection f;
  f.name = "custom";
  f.basis = j.at("basis").get<std::string>() == "chebyshev" ? Basis::Chebyshev : Basis::Monomial;
  f.re = j.at("coeffs_re").get<std::vector<double>>();
  f.im = j.at("coeffs_im").get<std::vector<double>>();
  return f;
}

}  // namespace detail

inline unsigned seed_override(unsigned seed) {
  if (const char* e = std::getenv("FUNCPREP_SEED")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(e, &end, 10);
    if (end == e || *end) throw DomainError("FUNCPREP_SEED must be a non-negative integer");
    return static_cast<unsigned>(v);
  }
  return seed;
}

// INI job file, or the "spec" object of an earlier report.
inline JobSpec load_job(const std::string& path) {
  JobSpec job;
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open job file: " + path);
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
    json r;
    try {
      r = json::parse(in);
    } catch (const std::exception& e) {
      throw DomainError(std::string("bad report: ") + e.what());
    }
    try {
      const json& s = r.contains("spec") ? r.at("spec") : r;
      job.n = s.at("grid").at("n").get<int>();
      job.a = s.at("grid").at("a").get<double>();
      job.b = s.at("grid").at("b").get<double>();
      if (s.contains("function")) job.function = detail::function_from_json(s.at("function"));
      if (s.contains("pieces"))
        for (const auto& p : s.at("pieces")) job.pieces.push_back(detail::function_from_json(p));
      if (s.contains("breakpoints")) job.breakpoints = s.at("breakpoints").get<std::vector<double>>();
      job.delta_phases = s.at("delta_phases").get<double>();
      job.seed = s.at("seed").get<unsigned>();
      job.mode = s.value("mode", std::string("sharing")) == "fallback" ? OracleMode::Fallback : OracleMode::Sharing;
    } catch (const json::exception& e) {
      throw DomainError(std::string("bad report spec: ") + e.what());
    }
  } else {
    boost::property_tree::ptree t;
    try {
      boost::property_tree::read_ini(in, t);
    } catch (const std::exception& e) {
      throw DomainError(std::string("bad job file: ") + e.what());
    }
    try {
      const auto& g = t.get_child("grid");
      job.n = static_cast<int>(detail::get_real(g, "n"));
      job.a = detail::get_real(g, "a");
      job.b = detail::get_real(g, "b");
      if (auto f = t.get_child_optional("function")) job.function = detail::read_function(*f);
      if (auto p = t.get_child_optional("pieces")) {
        job.breakpoints = detail::parse_list(p->get<std::string>("breakpoints", ""));
        for (std::size_t i = 0; i <= job.breakpoints.size(); ++i) {
          auto sec = t.get_child_optional("piece" + std::to_string(i));
          if (!sec) throw DomainError("missing section [piece" + std::to_string(i) + "]");
          job.pieces.push_back(detail::read_function(*sec));
        }
      }
      if (auto s = t.get_child_optional("solver")) {
        job.delta_phases = detail::get_real(*s, "delta_phases", 1e-10);
        job.seed = static_cast<unsigned>(detail::get_real(*s, "seed", 7.0));
        const std::string mode = s->get<std::string>("mode", "sharing");
        if (mode == "fallback") job.mode = OracleMode::Fallback;
        else if (mode != "sharing") throw DomainError("mode must be sharing or fallback");
      }
    } catch (const boost::property_tree::ptree_error& e) {
      throw DomainError(std::string("bad job file: ") + e.what());
    }
  }
  if (job.function.has_value() == !job.pieces.empty()) throw DomainError("give exactly one of [function] or [pieces]");
  if (!(job.delta_phases > 0)) throw DomainError("delta_phases must be positive");
  job.seed = seed_override(job.seed);
  return job;
}

// A job resolved to explicit coefficients.
struct ResolvedJob {
  JobSpec job;
  CoordinateGrid grid;
  PiecewiseSpec pieces;  // one piece for a plain function
  std::vector<std::string> names;
  std::vector<SeriesParams> params;
  std::vector<FunctionSpec> specs;
};

namespace detail {

inline FunctionSpec resolve_function(const FunctionSection& f) {
  if (f.named()) {
    SeriesParams p = f.params;
    return expand(f.name, p, f.epsilon);
  }
  FunctionSpec s;
  s.basis = f.basis;
  const std::size_t m = std::max(f.re.size(), f.im.size());
  for (std::size_t j = 0; j < m; ++j)
    s.coeffs.emplace_back(j < f.re.size() ? f.re[j] : 0.0, j < f.im.size() ? f.im[j] : 0.0);
  return s;
}

inline void check_named_domain(const FunctionSection& f, const CoordinateGrid& g) {
  if (f.name == "reciprocal") {
    const double r = 1.0 / f.params.delta, a = g.a - g.shift, b = g.b - g.shift;
    if (!(a >= r || b <= -r)) throw DomainError("reciprocal needs the interval inside |x| >= 1/delta");
  }
}

}  // namespace detail

inline ResolvedJob resolve(const JobSpec& job) {
  ResolvedJob r;
  r.job = job;
  r.grid = make_grid(job.n, job.a, job.b);
  auto add = [&](const FunctionSection& f) {
    detail::check_named_domain(f, r.grid);
    r.specs.push_back(detail::resolve_function(f));
    r.names.push_back(f.name);
    r.params.push_back(f.params);
  };
  if (job.function && is_piecewise_row(job.function->name)) {
    const double left = job.function->name == "relu" ? 0.0 : job.function->params.slope;
    r.pieces = relu_spec(left, 1.0);
    for (const auto& p : r.pieces.pieces) {
      r.specs.push_back(p);
      r.names.push_back("custom");
      r.params.push_back({});
    }
    r.names.assign(2, job.function->name);
  } else if (job.function) {
    add(*job.function);
    r.pieces.pieces = r.specs;
  } else {
    for (const auto& f : job.pieces) add(f);
    r.pieces.pieces = r.specs;
    r.pieces.breakpoints = job.breakpoints;
  }
  return r;
}

inline json function_json(const FunctionSpec& f) {
  json j;
  j["name"] = f.name;
  j["basis"] = f.basis == Basis::Chebyshev ? "chebyshev" : "monomial";
  std::vector<double> re, im;
  for (auto c : f.coeffs) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j["coeffs_re"] = re;
  j["coeffs_im"] = im;
  j["degree"] = f.degree();
  j["epsilon"] = f.epsilon;
  j["epsilon_kind"] = f.certified ? "bound" : "estimate";
  return j;
}

inline json spec_json(const ResolvedJob& r) {
  json s;
  s["grid"] = {{"n", r.grid.n}, {"a", r.job.a}, {"b", r.job.b}, {"shift", r.grid.shift}};
  if (r.specs.size() == 1) {
    s["function"] = function_json(r.specs[0]);
  } else {
    s["pieces"] = json::array();
    for (const auto& f : r.specs) s["pieces"].push_back(function_json(f));
    s["breakpoints"] = r.pieces.breakpoints;
    s["breakpoint_indices"] = breakpoint_indices(r.pieces, r.grid);
  }
  s["delta_phases"] = r.job.delta_phases;
  s["seed"] = r.job.seed;
  s["mode"] = r.job.mode == OracleMode::Fallback ? "fallback" : "sharing";
  return s;
}

inline json census_json(const GateCensus& c) {
  return {{"one_qubit_ops", c.one_qubit_ops}, {"cnots", c.cnots}, {"toffolis", c.toffolis}, {"native_gates", c.native_gates}};
}

inline json bound_json(const std::string& name, const CensusBound& b, const GateCensus& c) {
  return {{"name", name},
          {"formula_one_qubit", b.formula_one_qubit},
          {"formula_cnots", b.formula_cnots},
          {"bound_one_qubit", b.one_qubit_ops},
          {"bound_cnots", b.cnots},
          {"measured_one_qubit", c.one_qubit_ops},
          {"measured_cnots", c.cnots},
          {"ratio", b.ratio(c)},
          {"pass", b.holds(c)}};
}

struct Compiled {
  ResolvedJob job;
  UfCircuit uf;
  double build_seconds = 0.0;
};

inline Compiled compile(const JobSpec& spec) {
  Compiled c;
  auto t0 = std::chrono::steady_clock::now();
  c.job = resolve(spec);
  AssemblyOptions opt;
  opt.mode = spec.mode;
  opt.solver.delta = spec.delta_phases;
  opt.solver.seed = spec.seed;
  c.uf = assemble_piecewise(c.job.pieces, c.job.grid, opt);
  c.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

// Census by stage label, with the resource ceilings each part is held to.
inline json census_report(const Compiled& c) {
  const auto& circ = c.uf.circuit;
  const int n = c.job.grid.n;
  json out;
  out["total"] = census_json(census(circ));
  std::map<std::string, GateCensus> by_label;
  std::vector<std::string> order;
  GateCensus worst_oracle;
  for (const auto& st : circ.stages()) {
    auto k = census(circ, st);
    if (!by_label.count(st.label)) order.push_back(st.label);
    by_label[st.label] += k;
    if (st.label == "amplitude_oracle_x") {
      worst_oracle.one_qubit_ops = std::max(worst_oracle.one_qubit_ops, k.one_qubit_ops);
      worst_oracle.cnots = std::max(worst_oracle.cnots, k.cnots);
    }
  }
  json stages = json::object();
  for (const auto& l : order) stages[l] = census_json(by_label[l]);
  out["stages"] = stages;
  int Q = 0;
  for (const auto& f : c.job.specs) Q = std::max(Q, f.degree());
  json b = json::array();
  if (c.job.specs.size() == 1) {
    b.push_back(bound_json("state_preparation(Q=" + std::to_string(Q) + ",n=" + std::to_string(n) + ")",
                           bounds::state_preparation(Q, n), census(circ)));
    if (by_label.count("prepare_alpha"))
      b.push_back(bound_json("prepare_alpha", bounds::prepare_alpha(), by_label["prepare_alpha"]));
  }
  if (by_label.count("amplitude_oracle_x"))
    b.push_back(bound_json("amplitude_oracle_x(n=" + std::to_string(n) + ") per call", bounds::amplitude_oracle_x(n),
                           worst_oracle));
  if (c.job.specs.size() > 1)
    for (auto kn : breakpoint_indices(c.job.pieces, c.job.grid))
      b.push_back(bound_json("comparator(n=" + std::to_string(n) + ",K_n=" + std::to_string(kn) + ")",
                             bounds::comparator(n), census(comparator(kn, n))));
  out["bounds"] = b;
  bool all = true;
  for (const auto& x : b) all = all && x["pass"].get<bool>();
  out["all_bounds_pass"] = all;
  return out;
}

inline json layout_json(const QubitLayout& l) {
  return {{"main", l.main().size},        {"be_flag", l.be_flag().size},
          {"qsvt_flag", l.qsvt_flag().size}, {"lcu_select", l.lcu_select().size},
          {"indicator", l.indicator().size}, {"pure_ancillas", l.pure_ancillas().size},
          {"width", l.width()}};
}

inline json compile_report(const Compiled& c, bool timings) {
  json r;
  r["tool"] = "funcprep";
  r["spec"] = spec_json(c.job);
  r["layout"] = layout_json(c.uf.circuit.layout());
  json d;
  d["alpha_total"] = c.uf.alpha_total;
  d["selector_qubits"] = c.uf.selector.size();
  d["q_odd"] = c.uf.q_odd;
  d["q_even"] = c.uf.q_even;
  json pieces = json::array();
  double worst = 0.0;
  for (std::size_t g = 0; g < c.uf.pieces.size(); ++g) {
    json p;
    p["alpha"] = std::vector<double>(c.uf.pieces[g].alpha.begin(), c.uf.pieces[g].alpha.end());
    json ph = json::array();
    for (int s = 0; s < 4; ++s) {
      ph.push_back(c.uf.phases[g][s]);
      worst = std::max(worst, c.uf.phase_residuals[g][s]);
    }
    p["phases"] = ph;
    pieces.push_back(p);
  }
  d["pieces"] = pieces;
  r["decomposition"] = d;
  r["phase_solver"] = {{"max_residual", worst}, {"restarts", c.uf.solver_restarts}, {"tolerance", c.job.job.delta_phases}};
  r["gate_census"] = census_report(c);
  if (timings) r["timings"] = {{"build_seconds", c.build_seconds}};
  return r;
}

// Exact values of the named function(s) on the grid, when available.
inline std::optional<std::vector<std::complex<double>>> true_values(const ResolvedJob& r) {
  const auto kn = r.specs.size() > 1 ? breakpoint_indices(r.pieces, r.grid) : std::vector<std::uint64_t>{};
  std::vector<std::complex<double>> v;
  for (std::uint64_t k = 0; k < r.grid.points(); ++k) {
    const std::size_t g = piece_of(kn, k);
    const double x = r.grid.x[k] - r.grid.shift;
    if (is_piecewise_row(r.names[g])) {
      v.push_back(r.specs[g](x));
      continue;
    }
    if (r.names[g] == "custom") return std::nullopt;
    v.push_back(series_value(r.names[g], x, r.params[g]));
  }
  return v;
}

inline json simulate_report(const Compiled& c, bool timings) {
  if (c.uf.circuit.width() > kMaxSimWidth)
    throw ResourceError("circuit width " + std::to_string(c.uf.circuit.width()) + " exceeds the simulator limit of " +
                        std::to_string(kMaxSimWidth));
  json r = compile_report(c, timings);
  auto t0 = std::chrono::steady_clock::now();
  const auto target = piecewise_values(c.job.pieces, c.job.grid);
  auto o = simulate_uf(c.uf, target);
  json s;
  s["success_probability"] = o.success_probability;
  double mass = 0.0;
  for (auto v : target) mass += std::norm(v);
  s["predicted_success_probability"] = mass / (static_cast<double>(c.job.grid.points()) * c.uf.alpha_total * c.uf.alpha_total);
  s["fidelity_truncated"] = o.fidelity;
  if (auto tv = true_values(c.job)) s["fidelity_true"] = fidelity(o.post_state, *tv);
  s["ancilla_leakage"] = {{"pure", o.pure_leakage}, {"work_flag_sector", o.work_sector_leakage}, {"work_full_state", o.work_full_leakage}};
  r["simulation"] = s;
  if (timings) r["timings"]["simulate_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Simulation of a bare circuit: post-selection on the flag register only.
inline json simulate_qasm_report(const Circuit& c) {
  if (c.width() > kMaxSimWidth)
    throw ResourceError("circuit width " + std::to_string(c.width()) + " exceeds the simulator limit of " +
                        std::to_string(kMaxSimWidth));
  auto s = run(c);
  const auto& l = c.layout();
  json r;
  r["tool"] = "funcprep";
  r["layout"] = layout_json(l);
  std::vector<int> flags = l.flag_qubits();
  std::vector<int> rest = l.pure_ancillas().qubits();
  for (int q : l.indicator().qubits()) rest.push_back(q);
  json sim;
  sim["success_probability"] = 1.0 - verify_pure_ancillas(s, flags);
  sim["ancilla_leakage"] = {{"flag_sector", sector_leakage(s, rest, flags)}};
  auto post = restrict_to(s, l.main().qubits());
  double nrm = 0.0;
  for (auto a : post) nrm += std::norm(a);
  json re = json::array(), im = json::array();
  for (auto a : post) {
    re.push_back(nrm > 0 ? a.real() / std::sqrt(nrm) : 0.0);
    im.push_back(nrm > 0 ? a.imag() / std::sqrt(nrm) : 0.0);
  }
  sim["post_state_re"] = re;
  sim["post_state_im"] = im;
  r["simulation"] = sim;
  return r;
}

}  // namespace funcprep::cli
