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

#pragma once

// Parameter sweeps over one or two axes, with an optional inner
// minimization of g2(0) along a third axis, executed on a worker pool.
// Rows are written in row-major axis order (axis2 fastest) regardless of
// the thread count.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "qiblockade/config.hpp"
#include "qiblockade/errors.hpp"
#include "qiblockade/observables.hpp"

namespace qiblockade {

/// Runs fn(0..n-1) on `threads` workers. fn must not throw.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (workers <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next.fetch_add(1); k < n; k = next.fetch_add(1)) fn(k);
    });
  }
}

struct MinimizeResult {
  double argmin = 0.0;  // in the axis' own units
  double g2_0 = std::numeric_limits<double>::infinity();
  ObservableRecord record;
};

namespace detail {

inline double g2_or_inf(const ObservableRecord& r) {
  return r.g2_0 ? *r.g2_0 : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Minimizes g2(0) along `axis` (grid scan, then golden-section refinement
/// between the neighbours of the best grid point).
inline MinimizeResult minimize_g2(const Config& cfg, std::map<std::string, Quantity> overrides, const Axis& axis,
                                  int refine_iterations = 32) {
  auto eval = [&](double v) {
    overrides[axis.name] = Quantity{v, axis.start.unit};
    return evaluate_point(resolve(cfg, overrides));
  };
  MinimizeResult best;
  int best_k = 0;
  for (int k = 0; k < axis.count; ++k) {
    const double v = axis.at(k).value;
    ObservableRecord r = eval(v);
    if (detail::g2_or_inf(r) < best.g2_0) {
      best = {v, detail::g2_or_inf(r), std::move(r)};
      best_k = k;
    }
  }
  double lo = axis.at(std::max(best_k - 1, 0)).value;
  double hi = axis.at(std::min(best_k + 1, axis.count - 1)).value;
  if (lo > hi) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  ObservableRecord r1 = eval(x1);
  ObservableRecord r2 = eval(x2);
  for (int it = 0; it < refine_iterations; ++it) {
    if (detail::g2_or_inf(r1) < detail::g2_or_inf(r2)) {
      hi = x2;
      x2 = x1;
      r2 = std::move(r1);
      x1 = hi - inv_phi * (hi - lo);
      r1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      r1 = std::move(r2);
      x2 = lo + inv_phi * (hi - lo);
      r2 = eval(x2);
    }
  }
  for (auto* cand : {&r1, &r2}) {
    const double x = cand == &r1 ? x1 : x2;
    if (detail::g2_or_inf(*cand) < best.g2_0) best = {x, detail::g2_or_inf(*cand), std::move(*cand)};
  }
  return best;
}

struct Reoptimized {
  double theta;
  double omega_rabi;
  double g2_0;
};

/// Local 21x21 grid around p's (theta, omega_rabi): +-0.05 pi in theta and
/// +-10% in omega_rabi. Returns the best point.
inline Reoptimized reoptimize_locally(const SystemParams& p, int points = 21) {
  Reoptimized best{p.theta, p.omega_rabi, std::numeric_limits<double>::infinity()};
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      SystemParams q = p;
      q.theta = p.theta + (-0.05 + 0.1 * i / (points - 1)) * std::numbers::pi;
      q.omega_rabi = p.omega_rabi * (0.9 + 0.2 * j / (points - 1));
      const double g2 = detail::g2_or_inf(evaluate_point(q));
      if (g2 < best.g2_0) best = {q.validated().theta, q.omega_rabi, g2};
    }
  }
  return best;
}

struct SweepOptions {
  int threads = 1;
  bool reoptimize = false;
};

struct SweepRow {
  std::vector<double> axis_values;
  std::optional<double> argmin;
  SystemParams params;  // the point the observables belong to
  ObservableRecord record;
  std::optional<Reoptimized> reopt;
  bool converged = false;
  std::string error;
};

struct SweepResult {
  std::vector<std::string> axis_names;
  std::optional<std::string> minimize_name;
  std::vector<std::string> outputs;
  bool show_drive = false;
  bool reoptimized = false;
  int n_max = kDefaultNMax;
  std::vector<SweepRow> rows;

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.converged; }));
  }
};

inline SweepResult run_sweep(const Config& cfg, const SweepOptions& opt = {}) {
  if (!cfg.axis1) throw ValidationError("sweep needs axis1");
  std::vector<Axis> axes{*cfg.axis1};
  if (cfg.axis2) axes.push_back(*cfg.axis2);
  if (axes.size() == 2 && axes[0].name == axes[1].name) throw ValidationError("sweep axes must differ");
  if (cfg.minimize_over) {
    for (const Axis& a : axes) {
      if (a.name == cfg.minimize_over->name) throw ValidationError("minimize_over repeats a sweep axis");
    }
  }
  if (opt.reoptimize && cfg.optimal == Optimal::kNone) {
    throw ValidationError("--reoptimize needs optimal = red or blue");
  }

  SweepResult result;
  for (const Axis& a : axes) result.axis_names.push_back(a.name);
  if (cfg.minimize_over) result.minimize_name = cfg.minimize_over->name;
  result.outputs = cfg.outputs;
  result.show_drive = cfg.optimal != Optimal::kNone;
  result.reoptimized = opt.reoptimize;
  result.n_max = cfg.n_max;

  const std::size_t n2 = axes.size() == 2 ? static_cast<std::size_t>(axes[1].count) : 1;
  const std::size_t total = static_cast<std::size_t>(axes[0].count) * n2;
  result.rows.resize(total);

  parallel_for(total, opt.threads, [&](std::size_t idx) {
    SweepRow& row = result.rows[idx];
    std::map<std::string, Quantity> overrides;
    const int k1 = static_cast<int>(idx / n2);
    overrides[axes[0].name] = axes[0].at(k1);
    row.axis_values.push_back(axes[0].at(k1).value);
    if (axes.size() == 2) {
      const int k2 = static_cast<int>(idx % n2);
      overrides[axes[1].name] = axes[1].at(k2);
      row.axis_values.push_back(axes[1].at(k2).value);
    }
    try {
      if (cfg.minimize_over) {
        MinimizeResult m = minimize_g2(cfg, overrides, *cfg.minimize_over);
        row.argmin = m.argmin;
        overrides[cfg.minimize_over->name] = Quantity{m.argmin, cfg.minimize_over->start.unit};
        row.record = std::move(m.record);
      } else {
        row.record = evaluate_point(resolve(cfg, overrides));
      }
      row.params = row.record.params_echo;
      if (opt.reoptimize) row.reopt = reoptimize_locally(row.params);
      row.converged = true;
    } catch (const std::exception& e) {
      row.converged = false;
      row.error = e.what();
    }
  });
  return result;
}

namespace detail {

/// Shortest round-trip representation.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline void write_csv(const SweepResult& r, std::ostream& out) {
  std::vector<std::string> header = r.axis_names;
  if (r.minimize_name) header.push_back(*r.minimize_name + "_at_min");
  if (r.show_drive) {
    header.push_back("theta");
    header.push_back("omega_rabi");
  }
  for (const std::string& o : r.outputs) {
    if (o == "p_n") {
      for (int n = 0; n <= r.n_max; ++n) header.push_back("p_" + std::to_string(n));
    } else {
      header.push_back(o);
    }
  }
  if (r.reoptimized) {
    header.push_back("theta_reopt");
    header.push_back("omega_rabi_reopt");
    header.push_back("g2_0_reopt");
  }
  header.push_back("residual");
  header.push_back("converged");

  auto join = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
    out << '\n';
  };
  join(header);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const SweepRow& row : r.rows) {
    std::vector<std::string> cells;
    for (double v : row.axis_values) cells.push_back(detail::format_double(v));
    if (r.minimize_name) cells.push_back(detail::format_double(row.argmin.value_or(nan)));
    if (r.show_drive) {
      cells.push_back(detail::format_double(row.converged ? row.params.theta : nan));
      cells.push_back(detail::format_double(row.converged ? row.params.omega_rabi : nan));
    }
    for (const std::string& o : r.outputs) {
      if (o == "n_c") {
        cells.push_back(detail::format_double(row.converged ? row.record.n_c : nan));
      } else if (o == "g2_0") {
        cells.push_back(detail::format_double(row.converged ? row.record.g2_0.value_or(nan) : nan));
      } else {
        for (int n = 0; n <= r.n_max; ++n) {
          const auto k = static_cast<std::size_t>(n);
          cells.push_back(detail::format_double(row.converged && k < row.record.p_n.size() ? row.record.p_n[k] : nan));
        }
      }
    }
    if (r.reoptimized) {
      cells.push_back(detail::format_double(row.reopt ? row.reopt->theta : nan));
      cells.push_back(detail::format_double(row.reopt ? row.reopt->omega_rabi : nan));
      cells.push_back(detail::format_double(row.reopt ? row.reopt->g2_0 : nan));
    }
    cells.push_back(detail::format_double(row.converged ? row.record.residual : nan));
    cells.push_back(row.converged ? "1" : "0");
    join(cells);
  }
}

}  // namespace qiblockade
