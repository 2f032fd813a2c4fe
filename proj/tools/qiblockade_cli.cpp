// Copyright 2026 The qiblockade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qiblockade: command-line driver for steady-state photon-blockade
// calculations.
//
//   qiblockade point    [--config f] [--set key=value ...]
//   qiblockade optimal  [--config f] [--g x] [--gamma x] [--eta x] [--branch red|blue]
//   qiblockade sweep    --config f [--out f] [--threads n] [--reoptimize]
//   qiblockade g2tau    [--config f] [--out f] [--tau-max x] [--points n] [--time-convention c]
//   qiblockade check    [--config f]
//
// Exit codes: 0 success, 1 validation error, 2 solver failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qiblockade/checks.hpp"
#include "qiblockade/config.hpp"
#include "qiblockade/errors.hpp"
#include "qiblockade/model.hpp"
#include "qiblockade/observables.hpp"
#include "qiblockade/sweep.hpp"

namespace {

using namespace qiblockade;
using json = nlohmann::json;

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_path;
  std::optional<int> n_max;
  std::optional<std::string> convention;
  int threads = 1;
  bool reoptimize = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string key_of(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  const auto eq = body.find('=');
  if (eq == std::string::npos) return {};
  std::string key = body.substr(0, eq);
  key.erase(0, key.find_first_not_of(" \t"));
  key.erase(key.find_last_not_of(" \t\r") + 1);
  return key;
}

/// Config file (or `kappa = 1` when none is given) with --set lines and the
/// --nmax/--convention flags applied on top.
Config load(const GlobalOptions& g) {
  std::string text = g.config_path.empty() ? std::string("kappa = 1\n") : read_file(g.config_path);
  std::vector<std::string> extra = g.sets;
  if (g.n_max) extra.push_back("n_max = " + std::to_string(*g.n_max));
  if (g.convention) extra.push_back("convention = " + *g.convention);
  for (const std::string& s : extra) {
    const std::string key = key_of(s);
    if (key.empty()) throw ValidationError("--set expects key=value, got '" + s + "'");
    std::istringstream lines(text);
    std::string kept, line;
    while (std::getline(lines, line)) {
      if (key_of(line) != key) kept += line + "\n";
      else kept += "\n";  // keep line numbers stable
    }
    text = kept + s + "\n";
  }
  std::istringstream in(text);
  return parse_config(in, g.config_path.empty() ? "<defaults>" : g.config_path);
}

json params_json(const SystemParams& p) {
  return json{{"g", p.g},
              {"kappa", p.kappa},
              {"gamma", p.gamma},
              {"gamma_d", p.gamma_d},
              {"eta", p.eta},
              {"omega_rabi", p.omega_rabi},
              {"theta", p.theta},
              {"theta_over_pi", p.theta / std::numbers::pi},
              {"delta_c", p.delta_c},
              {"n_max", p.n_max},
              {"convention", to_string(p.rate_convention)}};
}

class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_point(const GlobalOptions& g) {
  const Config cfg = load(g);
  const SystemParams p = resolve(cfg);
  const ObservableRecord r = evaluate_point(p);
  json out{{"params", params_json(p)}, {"n_c", r.n_c}, {"p_n", r.p_n}, {"residual", r.residual}};
  out["g2_0"] = r.g2_0 ? json(*r.g2_0) : json(nullptr);
  OutputSink sink(g.out_path);
  sink.stream() << out.dump(2) << "\n";
  return 0;
}

struct OptimalArgs {
  std::optional<double> g, gamma, eta;
  std::string branch = "red";
};

int cmd_optimal(const GlobalOptions& gopt, const OptimalArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  Config cfg = load(gopt);
  cfg.optimal = Optimal::kNone;
  SystemParams p = resolve(cfg);
  if (a.g) p.g = *a.g;
  if (a.gamma) p.gamma = *a.gamma;
  if (a.eta) p.eta = *a.eta;
  p.validate();
  if (a.branch != "red" && a.branch != "blue") throw ValidationError("--branch must be red or blue");
  const OptimalConditions oc = optimal_conditions(p);
  const double theta = a.branch == "red" ? oc.theta_opt_red : oc.theta_opt_blue;
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  json out{{"branch", a.branch},
           {"g", p.g},
           {"kappa", p.kappa},
           {"gamma", p.gamma},
           {"eta", p.eta},
           {"theta", theta},
           {"theta_over_pi", theta / std::numbers::pi},
           {"tan_theta", std::tan(theta)},
           {"omega_opt", oc.omega_opt},
           {"omega_over_g", oc.omega_opt / p.g},
           {"r_value", oc.r_value},
           {"delta_c", a.branch == "red" ? p.g : -p.g},
           {"elapsed_ms", elapsed_ms}};
  if (cfg.kappa_ghz) out["omega_opt_ghz"] = oc.omega_opt * *cfg.kappa_ghz;
  OutputSink sink(gopt.out_path);
  sink.stream() << out.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const GlobalOptions& g) {
  if (g.config_path.empty()) throw ValidationError("sweep needs --config");
  const Config cfg = load(g);
  const SweepResult r = run_sweep(cfg, SweepOptions{g.threads, g.reoptimize});
  OutputSink sink(g.out_path);
  write_csv(r, sink.stream());
  const std::size_t failed = r.failures();
  if (failed > 0) {
    std::cerr << "warning: " << failed << " of " << r.rows.size() << " points did not converge\n";
    for (const SweepRow& row : r.rows) {
      if (!row.converged) {
        std::cerr << "  " << row.error << "\n";
        break;
      }
    }
  }
  return failed == r.rows.size() ? 2 : 0;
}

struct G2TauArgs {
  std::optional<double> tau_max;
  std::optional<int> points;
  std::string time_convention = "none";
};

int cmd_g2tau(const GlobalOptions& g, const G2TauArgs& a) {
  const Config cfg = load(g);
  const SystemParams p = resolve(cfg);
  const double tau_max = a.tau_max.value_or(cfg.tau_max);
  const int points = a.points.value_or(cfg.tau_points);

  // kappa in 1/ps under the chosen reading of kappa_ghz.
  std::optional<double> kappa_per_ps;
  if (a.time_convention != "none") {
    if (!cfg.kappa_ghz) throw ValidationError("--time-convention needs kappa_ghz in the config");
    if (a.time_convention == "angular") kappa_per_ps = 2.0 * std::numbers::pi * *cfg.kappa_ghz * 1e-3;
    else if (a.time_convention == "ordinary") kappa_per_ps = *cfg.kappa_ghz * 1e-3;
    else throw ValidationError("--time-convention must be none, angular or ordinary");
  }

  const G2TauSeries s = compute_g2_tau(p, tau_max, points);
  OutputSink sink(g.out_path);
  std::ostream& out = sink.stream();
  out << "tau_kappa,tau_kappa_gamma";
  if (kappa_per_ps) out << ",tau_ps";
  out << ",g2_tau\n";
  for (std::size_t k = 0; k < s.tau.size(); ++k) {
    const double tk = s.tau[k] * p.kappa;
    out << detail::format_double(tk) << "," << detail::format_double(s.tau[k] * (p.kappa + p.gamma));
    if (kappa_per_ps) out << "," << detail::format_double(tk / *kappa_per_ps);
    out << "," << detail::format_double(s.g2[k]) << "\n";
  }
  return 0;
}

int cmd_check(const GlobalOptions& g) {
  const Config cfg = load(g);
  const SystemParams p = resolve(cfg);
  std::vector<CheckResult> results = run_invariant_checks(p);

  // Thread-count independence on a small sweep around the point.
  try {
    Config small = cfg;
    small.axis1 = parse_axis("delta_c:0.5g:1.5g:6", "check");
    small.axis2.reset();
    small.minimize_over.reset();
    std::ostringstream one, many;
    write_csv(run_sweep(small, {1, false}), one);
    write_csv(run_sweep(small, {4, false}), many);
    results.push_back({"sweep_thread_determinism", one.str() == many.str(), "1 vs 4 threads, 6 points"});
  } catch (const std::exception& e) {
    results.push_back({"sweep_thread_determinism", false, e.what()});
  }

  bool all = true;
  OutputSink sink(g.out_path);
  for (const CheckResult& r : results) {
    sink.stream() << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
    all = all && r.pass;
  }
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-blockade steady states of a driven quantum dot-cavity system"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Key-value config file");
  app.add_option("--set", g.sets, "Override a config key (key=value), repeatable");
  app.add_option("--out", g.out_path, "Output file (default: stdout)");
  app.add_option("--nmax", g.n_max, "Fock-space truncation")->check(CLI::Range(2, 60));
  app.add_option("--convention", g.convention, "Rate convention")->check(CLI::IsMember({"half", "full"}));
  app.add_option("--threads", g.threads, "Worker threads for sweeps")->check(CLI::Range(1, 1024));
  app.add_flag("--reoptimize", g.reoptimize, "Refine (theta, omega_rabi) on a local 21x21 grid per sweep row");

  auto* point = app.add_subcommand("point", "Steady-state observables at one parameter point");
  auto* optimal = app.add_subcommand("optimal", "Closed-form optimal interference conditions");
  OptimalArgs oa;
  optimal->add_option("--g", oa.g, "QD-cavity coupling (units of kappa)");
  optimal->add_option("--gamma", oa.gamma, "QD decay rate (units of kappa)");
  optimal->add_option("--eta", oa.eta, "Cavity drive (units of kappa)");
  optimal->add_option("--branch", oa.branch, "red (delta_c = +g) or blue (delta_c = -g)")
      ->check(CLI::IsMember({"red", "blue"}));
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep written as CSV");
  auto* g2tau = app.add_subcommand("g2tau", "Delayed second-order correlation written as CSV");
  G2TauArgs ga;
  g2tau->add_option("--tau-max", ga.tau_max, "Largest delay in units of 1/kappa");
  g2tau->add_option("--points", ga.points, "Number of delays (uniform grid from 0)");
  g2tau->add_option("--time-convention", ga.time_convention,
                    "Absolute time column: none, angular (kappa = 2 pi kappa_ghz) or ordinary (kappa = kappa_ghz)");
  auto* check = app.add_subcommand("check", "Run the invariant suite at a parameter point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (point->parsed()) return cmd_point(g);
    if (optimal->parsed()) return cmd_optimal(g, oa);
    if (sweep->parsed()) return cmd_sweep(g);
    if (g2tau->parsed()) return cmd_g2tau(g, ga);
    if (check->parsed()) return cmd_check(g);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
