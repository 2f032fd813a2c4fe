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

// Invariant suite run by `qiblockade check` and the acceptance tests.

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qiblockade/hilbert.hpp"
#include "qiblockade/lindblad.hpp"
#include "qiblockade/model.hpp"
#include "qiblockade/observables.hpp"
#include "qiblockade/sweep.hpp"

namespace qiblockade {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline double relative_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); }

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace detail

/// Truncation tolerance for n_max -> n_max + extra.
inline constexpr double kTruncationTol = 1e-6;
inline constexpr double kRegressionTol = 1e-6;
inline constexpr double kDissipativityTol = 1e-10;
inline constexpr double kTraceDefectTol = 1e-10;

inline std::vector<CheckResult> run_invariant_checks(const SystemParams& params, bool with_spectrum = true,
                                                     int truncation_extra = 4) {
  std::vector<CheckResult> out;
  auto guard = [&out](const std::string& name, const std::function<CheckResult()>& body) {
    try {
      out.push_back(body());
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };
  const SystemParams p = params.validated();
  const CompositeOperators ops(p.dims());

  guard("hamiltonian_hermitian", [&] {
    const Operator h = build_hamiltonian(p, ops);
    const double err = (h.data() - h.data().adjoint()).cwiseAbs().maxCoeff();
    return CheckResult{"hamiltonian_hermitian", err <= 1e-14, "max|H - H'| = " + detail::fmt(err)};
  });

  guard("ladder_commutator", [&] {
    const Matrix a = fock_annihilation(p.n_max);
    Matrix defect = a * a.adjoint() - a.adjoint() * a - Matrix::Identity(p.n_max + 1, p.n_max + 1);
    const double corner = std::abs(defect(p.n_max, p.n_max) + static_cast<double>(p.n_max + 1));
    defect(p.n_max, p.n_max) = 0.0;
    const double rest = defect.cwiseAbs().maxCoeff();
    return CheckResult{"ladder_commutator", corner < 1e-12 && rest < 1e-12,
                       "boundary defect " + detail::fmt(corner) + ", elsewhere " + detail::fmt(rest)};
  });

  const Superoperator l = build_liouvillian(p, ops);

  guard("liouvillian_trace_preserving", [&] {
    const double defect = l.trace_defect();
    return CheckResult{"liouvillian_trace_preserving", defect < kTraceDefectTol,
                       "max|vec(I)' L| = " + detail::fmt(defect)};
  });

  if (with_spectrum) {
    guard("liouvillian_dissipative", [&] {
      const std::vector<Complex> ev = liouvillian_spectrum(l);
      int near_zero = 0;
      for (const Complex& z : ev) near_zero += std::abs(z) < 1e-8 ? 1 : 0;
      const bool ok = ev.front().real() <= kDissipativityTol && near_zero == 1;
      return CheckResult{"liouvillian_dissipative", ok,
                         "max Re(lambda) = " + detail::fmt(ev.front().real()) +
                             ", zero modes = " + std::to_string(near_zero)};
    });
  }

  guard("steady_state_density", [&] {
    const SteadyState s = steady_state(l);
    const DensityCheck c = check_density(s.rho.data());
    return CheckResult{"steady_state_density", c.ok() && s.residual < kSteadyResidualTol,
                       "herm " + detail::fmt(c.hermiticity_error) + ", trace " + detail::fmt(c.trace_error) +
                           ", min eig " + detail::fmt(c.min_eigenvalue) + ", residual " + detail::fmt(s.residual)};
  });

  guard("truncation_convergence", [&] {
    const ObservableRecord base = evaluate_point(p);
    SystemParams bigger = p;
    bigger.n_max = p.n_max + truncation_extra;
    const ObservableRecord big = evaluate_point(bigger);
    const double dn = detail::relative_change(base.n_c, big.n_c);
    const double dg = base.g2_0 && big.g2_0 ? detail::relative_change(*base.g2_0, *big.g2_0) : 0.0;
    return CheckResult{"truncation_convergence", dn < kTruncationTol && dg < kTruncationTol,
                       "n_max " + std::to_string(p.n_max) + "->" + std::to_string(bigger.n_max) +
                           ": dn_c " + detail::fmt(dn) + ", dg2 " + detail::fmt(dg)};
  });

  guard("regression_zero_delay", [&] {
    const Evaluation ev = evaluate(p);
    if (!ev.record.g2_0) return CheckResult{"regression_zero_delay", true, "g2 undefined at this point; skipped"};
    const std::vector<double> tau{0.0};
    const double via_tau = g2_tau(ev.liouvillian, ev.steady.rho, tau).front();
    const double diff = std::abs(via_tau - *ev.record.g2_0);
    return CheckResult{"regression_zero_delay", diff < kRegressionTol, "|g2_tau(0) - g2(0)| = " + detail::fmt(diff)};
  });

  return out;
}

}  // namespace qiblockade
