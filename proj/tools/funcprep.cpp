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


#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "funcprep/audit.hpp"
#include "job.hpp"

namespace {

using namespace funcprep;
using funcprep::cli::json;

constexpr int kExitDomain = 2;
constexpr int kExitSolver = 3;
constexpr int kExitResource = 4;

std::string default_prefix(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    std::string p = path.substr(0, dot);
    // foo.report.json -> foo
    if (p.size() > 7 && p.substr(p.size() - 7) == ".report") p.resize(p.size() - 7);
    return p;
  }
  return path;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

int run_expand(const std::string& name, double epsilon, const SeriesParams& p) {
  json j;
  if (is_piecewise_row(name)) {
    auto spec = relu_spec(name == "relu" ? 0.0 : p.slope, 1.0);
    j["name"] = name;
    j["route"] = "piecewise";
    j["breakpoints"] = spec.breakpoints;
    j["pieces"] = json::array();
    for (const auto& f : spec.pieces) j["pieces"].push_back(cli::function_json(f));
  } else {
    SeriesParams q = p;
    auto f = expand(name, q, epsilon);
    j = cli::function_json(f);
    if (name == "reciprocal") q.epsilon = epsilon;
    j["k"] = series_index_for(name, q, epsilon);
    j["domain"] = series_row(name).domain;
  }
  std::cout << cli::to_text(j);
  return 0;
}

// Writes the failure report and returns the solver exit code.
int solver_failure(const cli::JobSpec& spec, const std::string& prefix, const SolverError& e) {
  json r;
  r["tool"] = "funcprep";
  r["spec"] = cli::spec_json(cli::resolve(spec));
  r["error"] = e.what();
  r["best_residual"] = e.best_residual();
  write_file(prefix + ".report.json", cli::to_text(r));
  std::cerr << "error: " << e.what() << " (best residual " << e.best_residual() << ")\n";
  return kExitSolver;
}

int run_compile(const std::string& path, std::string prefix, bool timings) {
  if (prefix.empty()) prefix = default_prefix(path);
  const auto spec = cli::load_job(path);
  cli::Compiled c;
  try {
    c = cli::compile(spec);
  } catch (const SolverError& e) {
    return solver_failure(spec, prefix, e);
  }
  write_file(prefix + ".qasm", emit_qasm(c.uf.circuit));
  const json r = cli::compile_report(c, timings);
  write_file(prefix + ".report.json", cli::to_text(r));
  const auto& t = r["gate_census"]["total"];
  std::cout << "wrote " << prefix << ".qasm and " << prefix << ".report.json: width " << c.uf.circuit.width()
            << ", one_qubit_ops " << t["one_qubit_ops"].get<long long>() << ", cnots " << t["cnots"].get<long long>()
            << ", bounds " << (r["gate_census"]["all_bounds_pass"].get<bool>() ? "pass" : "FAIL") << "\n";
  return 0;
}

int run_simulate(const std::string& path, std::string prefix, bool timings) {
  if (prefix.empty()) prefix = default_prefix(path);
  if (path.size() > 5 && path.substr(path.size() - 5) == ".qasm") {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    const json r = cli::simulate_qasm_report(parse_qasm(ss.str()));
    write_file(prefix + ".report.json", cli::to_text(r));
    std::cout << "success_probability " << r["simulation"]["success_probability"].get<double>() << "\n";
    return 0;
  }
  const auto spec = cli::load_job(path);
  cli::Compiled c;
  try {
    c = cli::compile(spec);
  } catch (const SolverError& e) {
    return solver_failure(spec, prefix, e);
  }
  const json r = cli::simulate_report(c, timings);
  write_file(prefix + ".qasm", emit_qasm(c.uf.circuit));
  write_file(prefix + ".report.json", cli::to_text(r));
  const auto& s = r["simulation"];
  std::cout.precision(17);
  std::cout << "fidelity_truncated " << s["fidelity_truncated"].get<double>() << "\n";
  if (s.contains("fidelity_true")) std::cout << "fidelity_true " << s["fidelity_true"].get<double>() << "\n";
  std::cout << "success_probability " << s["success_probability"].get<double>() << "\n";
  return 0;
}

int run_count(const std::string& job, std::string prefix, int n_min, int n_max, int q_max, std::vector<int> Qs) {
  if (prefix.empty()) prefix = job.empty() ? "funcprep" : default_prefix(job);
  if (n_min < 2 || n_max < n_min || n_max > 20) throw DomainError("need 2 <= n-min <= n-max <= 20");
  std::vector<AuditRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    rows.push_back(audit::multi_control(n));
    rows.push_back(audit::binary_norm_prep(n));
    rows.push_back(audit::amplitude_oracle(n));
    for (int q = 1; q <= q_max; ++q) rows.push_back(audit::polynomial_oracle(q, n));
    rows.push_back(audit::comparator(n));
    for (int Q : Qs) {
      rows.push_back(audit::state_preparation(Q, n, OracleMode::Sharing));
      rows.push_back(audit::state_preparation(Q, n, OracleMode::Fallback));
    }
  }
  if (!job.empty()) {
    auto c = cli::compile(cli::load_job(job));
    int Q = 0;
    for (const auto& f : c.job.specs) Q = std::max(Q, f.degree());
    rows.push_back({"job", c.job.grid.n, Q, census(c.uf.circuit), bounds::state_preparation(Q, c.job.grid.n)});
  }
  std::ostringstream csv;
  csv << "component,n,q,one_qubit_ops,cnots,bound_one_qubit,bound_cnots,formula_one_qubit,formula_cnots,ratio,limit,pass\n";
  int failures = 0;
  for (const auto& r : rows) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.6f", r.ratio());
    csv << r.component << ',' << r.n << ',' << r.q << ',' << r.measured.one_qubit_ops << ',' << r.measured.cnots << ','
        << r.bound.one_qubit_ops << ',' << r.bound.cnots << ',' << r.bound.formula_one_qubit << ','
        << r.bound.formula_cnots << ',' << ratio << ',' << r.limit << ',' << (r.pass() ? "true" : "false") << '\n';
    failures += !r.pass();
  }
  write_file(prefix + ".counts.csv", csv.str());
  std::cout << "wrote " << prefix << ".counts.csv: " << rows.size() << " rows, " << failures << " over their limit\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile piecewise polynomials into one-qubit + CNOT state-preparation circuits"};
  app.require_subcommand(1);

  std::string name;
  double epsilon = 0.0;
  SeriesParams params;
  auto* ex = app.add_subcommand("expand", "Print the truncated series of a named function");
  ex->add_option("--name", name, "exp, cos, sin, gaussian, sigmoid, tanh, reciprocal, bessel_J, relu, leaky_relu")->required();
  ex->add_option("--epsilon", epsilon, "Target truncation error");
  ex->add_option("--t", params.t, "cos/sin frequency");
  ex->add_option("--sigma", params.sigma, "Gaussian width");
  ex->add_option("--delta", params.delta, "Reciprocal domain |x| >= 1/delta");
  ex->add_option("--order", params.order, "Bessel order");
  ex->add_option("--scale", params.scale, "Sigmoid input scale");
  ex->add_option("--slope", params.slope, "Leaky ReLU negative slope");

  std::string input, prefix;
  bool timings = false;
  auto* co = app.add_subcommand("compile", "Build the circuit for a job file and write .qasm and .report.json");
  co->add_option("job", input, "INI job file or an earlier .report.json")->required();
  co->add_option("-o,--output", prefix, "Output prefix (default: job path without extension)");
  co->add_flag("--timings", timings, "Record wall-clock timings in the report");

  auto* si = app.add_subcommand("simulate", "Compile and simulate a job, or simulate a .qasm circuit");
  si->add_option("input", input, "Job file, report, or .qasm circuit")->required();
  si->add_option("-o,--output", prefix, "Output prefix");
  si->add_flag("--timings", timings, "Record wall-clock timings in the report");

  int n_min = 3, n_max = 8, q_max = 9;
  std::vector<int> Qs = {2, 4, 8};
  auto* cn = app.add_subcommand("count", "Count-only census sweep against the closed-form ceilings");
  cn->add_option("job", input, "Optional job file whose circuit is added to the table");
  cn->add_option("-o,--output", prefix, "Output prefix (default: funcprep)");
  cn->add_option("--n-min", n_min, "Smallest register size");
  cn->add_option("--n-max", n_max, "Largest register size");
  cn->add_option("--q-max", q_max, "Largest QSVT degree for the oracle sweep");
  cn->add_option("--Q", Qs, "Function degrees for the full-circuit rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitDomain;
  }

  try {
    if (*ex) {
      if (!is_piecewise_row(name) && !(epsilon > 0)) throw DomainError("--epsilon must be positive");
      return run_expand(name, epsilon, params);
    }
    if (*co) return run_compile(input, prefix, timings);
    if (*si) return run_simulate(input, prefix, timings);
    if (*cn) return run_count(input, prefix, n_min, n_max, q_max, Qs);
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    return kExitSolver;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
