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

// Intracavity observables: photon number, g2(0), g2(tau), photon-number
// distribution.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qiblockade/errors.hpp"
#include "qiblockade/hilbert.hpp"
#include "qiblockade/lindblad.hpp"
#include "qiblockade/model.hpp"

namespace qiblockade {

/// Below this photon number g2 is reported as undefined.
inline constexpr double kMinPhotonNumber = 1e-12;

/// Default integration step cap in units of 1/kappa.
inline constexpr double kDefaultMaxStep = 0.01;

inline double photon_number(const DensityMatrix& rho, const CompositeOperators& ops) {
  return ops.num.expectation(rho.data()).real();
}

inline double photon_number(const DensityMatrix& rho) {
  return photon_number(rho, CompositeOperators(rho.dims()));
}

/// <a'a'aa>
inline double pair_correlation(const Matrix& rho, const CompositeOperators& ops) {
  const Matrix aa = ops.a.data() * ops.a.data();
  return (aa.adjoint() * aa * rho).trace().real();
}

inline double g2_zero(const DensityMatrix& rho, const CompositeOperators& ops) {
  const double n = photon_number(rho, ops);
  if (!(n > kMinPhotonNumber)) {
    throw SolverError("g2(0) undefined: photon number " + std::to_string(n) + " below threshold");
  }
  return pair_correlation(rho.data(), ops) / (n * n);
}

inline double g2_zero(const DensityMatrix& rho) { return g2_zero(rho, CompositeOperators(rho.dims())); }

inline std::vector<double> photon_distribution(const DensityMatrix& rho) {
  const SpaceDims& dims = rho.dims();
  std::vector<double> p(static_cast<std::size_t>(dims.fock_dim()), 0.0);
  for (int n = 0; n <= dims.n_max(); ++n) {
    p[static_cast<std::size_t>(n)] = rho.data()(dims.index(QdLevel::g, n), dims.index(QdLevel::g, n)).real() +
                                     rho.data()(dims.index(QdLevel::e, n), dims.index(QdLevel::e, n)).real();
  }
  return p;
}

namespace detail {

inline bool is_uniform(std::span<const double> grid) {
  if (grid.size() < 3) return grid.size() == 2 && grid[1] > grid[0];
  const double step = grid[1] - grid[0];
  if (!(step > 0.0)) return false;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double expected = grid[0] + static_cast<double>(k) * step;
    if (std::abs(grid[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) return false;
  }
  return true;
}

}  // namespace detail

/// g2(tau) = Tr(a'a e^{L tau}[a rho_s a']) / n_c^2 by the quantum regression
/// theorem. Uniform grids use a single matrix exponential; other grids are
/// integrated adaptively with steps capped at `max_step`.
inline std::vector<double> g2_tau(const Superoperator& l, const DensityMatrix& rho_s,
                                  std::span<const double> tau_grid, double max_step = kDefaultMaxStep) {
  for (std::size_t k = 0; k < tau_grid.size(); ++k) {
    if (!(tau_grid[k] >= 0.0)) throw ValidationError("tau grid must be nonnegative");
    if (k > 0 && !(tau_grid[k] > tau_grid[k - 1])) throw ValidationError("tau grid must be ascending");
  }
  const CompositeOperators ops(rho_s.dims());
  const double n = photon_number(rho_s, ops);
  if (!(n > kMinPhotonNumber)) throw SolverError("g2(tau) undefined: vanishing photon number");
  const double norm = 1.0 / (n * n);

  Matrix x = ops.a.data() * rho_s.data() * ops.a_dag.data();
  std::vector<double> out;
  out.reserve(tau_grid.size());
  if (tau_grid.empty()) return out;

  x = propagate(l, x, tau_grid[0], max_step);
  auto record = [&](const Matrix& m) { out.push_back((ops.num.data() * m).trace().real() * norm); };
  record(x);
  if (detail::is_uniform(tau_grid)) {
    const StepPropagator step(l, tau_grid[1] - tau_grid[0]);
    Vector v = vectorize(x);
    for (std::size_t k = 1; k < tau_grid.size(); ++k) {
      v = step.advance(v);
      record(unvectorize(v, rho_s.dims().total_dim()));
    }
  } else {
    for (std::size_t k = 1; k < tau_grid.size(); ++k) {
      x = propagate(l, x, tau_grid[k] - tau_grid[k - 1], max_step);
      record(x);
    }
  }
  return out;
}

struct ObservableRecord {
  double n_c = 0.0;
  std::optional<double> g2_0;  // empty when n_c is below kMinPhotonNumber
  std::vector<double> p_n;
  double residual = 0.0;
  SystemParams params_echo;
};

inline ObservableRecord observe(const DensityMatrix& rho, const CompositeOperators& ops) {
  ObservableRecord r;
  r.n_c = photon_number(rho, ops);
  if (r.n_c > kMinPhotonNumber) r.g2_0 = pair_correlation(rho.data(), ops) / (r.n_c * r.n_c);
  r.p_n = photon_distribution(rho);
  return r;
}

struct Evaluation {
  SystemParams params;
  Superoperator liouvillian;
  SteadyState steady;
  ObservableRecord record;
};

/// Builds L, solves the steady state and collects observables at one point.
inline Evaluation evaluate(const SystemParams& params) {
  const SystemParams p = params.validated();
  const CompositeOperators ops(p.dims());
  Superoperator l = build_liouvillian(p, ops);
  SteadyState s = steady_state(l);
  ObservableRecord r = observe(s.rho, ops);
  r.residual = s.residual;
  r.params_echo = p;
  return Evaluation{p, std::move(l), std::move(s), std::move(r)};
}

inline ObservableRecord evaluate_point(const SystemParams& params) { return evaluate(params).record; }

struct G2TauSeries {
  std::vector<double> tau;  // in units of 1/kappa
  std::vector<double> g2;
  double g2_zero;
};

/// g2(tau) on a uniform grid of n_points over [0, tau_max] (tau in 1/kappa).
inline G2TauSeries compute_g2_tau(const SystemParams& params, double tau_max, int n_points) {
  if (!(tau_max > 0.0)) throw ValidationError("tau_max must be > 0");
  if (n_points < 1) throw ValidationError("need at least one tau point");
  const Evaluation ev = evaluate(params);
  if (!ev.record.g2_0) throw SolverError("g2(tau) undefined: vanishing photon number");
  G2TauSeries s;
  s.g2_zero = *ev.record.g2_0;
  s.tau.resize(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    s.tau[static_cast<std::size_t>(k)] = n_points == 1 ? 0.0 : tau_max * k / (n_points - 1) / ev.params.kappa;
  }
  s.g2 = g2_tau(ev.liouvillian, ev.steady.rho, s.tau, kDefaultMaxStep / ev.params.kappa);
  return s;
}

}  // namespace qiblockade
