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

// Two-photon truncated wavefunction
//   |psi> = c0g|0,g> + c1g|1,g> + c0e|0,e> + c1e|1,e> + c2g|2,g>
// under the non-Hermitian effective Hamiltonian
//   H_eff = H - i ka a'a - i ga s_ee,
// where ka and ga are the field-amplitude decay rates. Pure dephasing has no
// wavefunction counterpart and is ignored here.
//
// Stationarity rows (i dc/dt = 0 for each amplitude):
//   0g:  eta c1g + W e^{i th} c0e
//   1g:  eta c0g + (dc - i ka) c1g + g c0e + W e^{i th} c1e + sqrt2 eta c2g
//   0e:  W e^{-i th} c0g + g c1g + (dc - i ga) c0e + eta c1e
//   1e:  W e^{-i th} c1g + eta c0e + sqrt2 g c2g + (2 dc - i ka - i ga) c1e
//   2g:  sqrt2 eta c1g + sqrt2 g c1e + (2 dc - 2i ka) c2g
// The 0g row carries no c0g term: it is the vacuum row with the drive
// anchor removed, the form from which the closed-form optimum follows.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "qiblockade/errors.hpp"
#include "qiblockade/model.hpp"

namespace qiblockade {

struct AmplitudeSet {
  Complex c0g{1.0, 0.0};
  Complex c1g{};
  Complex c0e{};
  Complex c1e{};
  Complex c2g{};

  double norm_squared() const {
    return std::norm(c0g) + std::norm(c1g) + std::norm(c0e) + std::norm(c1e) + std::norm(c2g);
  }

  AmplitudeSet normalized() const {
    const double n = std::sqrt(norm_squared());
    if (!(n > 0.0)) throw SolverError("cannot normalize a zero amplitude set");
    return {c0g / n, c1g / n, c0e / n, c1e / n, c2g / n};
  }
};

struct AmplitudeDecays {
  double cavity;  // ka
  double dot;     // ga
};

/// Decays as printed in the amplitude equations: ka = kappa, ga = gamma.
inline AmplitudeDecays nominal_decays(const SystemParams& p) { return {p.kappa, p.gamma}; }

/// Decays implied by the master equation under p.rate_convention.
inline AmplitudeDecays master_equation_decays(const SystemParams& p) {
  const double f = amplitude_decay_factor(p.rate_convention);
  return {f * p.kappa, f * p.gamma};
}

struct StationarityResiduals {
  Complex row_0g, row_1g, row_0e, row_1e, row_2g;

  std::array<double, 5> magnitudes() const {
    return {std::abs(row_0g), std::abs(row_1g), std::abs(row_0e), std::abs(row_1e), std::abs(row_2g)};
  }
};

inline StationarityResiduals stationarity_residuals(const AmplitudeSet& c, const SystemParams& p,
                                                    AmplitudeDecays d) {
  const Complex i{0.0, 1.0};
  const double s2 = std::sqrt(2.0);
  const Complex pump = p.omega_rabi * std::polar(1.0, p.theta);
  const Complex pump_c = std::conj(pump);
  const double dc = p.delta_c;
  StationarityResiduals r;
  r.row_0g = p.eta * c.c1g + pump * c.c0e;
  r.row_1g = p.eta * c.c0g + (dc - i * d.cavity) * c.c1g + p.g * c.c0e + pump * c.c1e + s2 * p.eta * c.c2g;
  r.row_0e = pump_c * c.c0g + p.g * c.c1g + (dc - i * d.dot) * c.c0e + p.eta * c.c1e;
  r.row_1e = pump_c * c.c1g + p.eta * c.c0e + s2 * p.g * c.c2g + (2.0 * dc - i * (d.cavity + d.dot)) * c.c1e;
  r.row_2g = s2 * p.eta * c.c1g + s2 * p.g * c.c1e + (2.0 * dc - 2.0 * i * d.cavity) * c.c2g;
  return r;
}

namespace detail {

inline std::string describe(const SystemParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(g=" << p.g << ", kappa=" << p.kappa << ", gamma=" << p.gamma << ", eta=" << p.eta
     << ", omega_rabi=" << p.omega_rabi << ", theta=" << p.theta << ", delta_c=" << p.delta_c << ")";
  return os.str();
}

}  // namespace detail

/// Solves the interference system: rows 0g, 2g, 1e (homogeneous in the
/// excited amplitudes) plus the driven 1g row, with c0g = 1 and the nominal
/// decays. The three homogeneous rows admit c2g = 0 exactly when (theta,
/// omega_rabi) satisfy the closed-form optimum at dc = +-g. The 0e row is
/// not imposed; its residual is reported by stationarity_residuals.
inline AmplitudeSet solve_amplitudes(const SystemParams& params) {
  const SystemParams p = params.validated();
  if (!(p.eta > 0.0)) throw ValidationError("amplitude equations need eta > 0");
  const Complex i{0.0, 1.0};
  const double s2 = std::sqrt(2.0);
  const Complex pump = p.omega_rabi * std::polar(1.0, p.theta);
  const Complex pump_c = std::conj(pump);
  const double dc = p.delta_c;
  const double ka = p.kappa;
  const double ga = p.gamma;

  // Unknown order: c1g, c0e, c1e, c2g.
  Eigen::Matrix4cd m;
  Eigen::Vector4cd rhs;
  m << p.eta, pump, 0.0, 0.0,                                      // 0g
      s2 * p.eta, 0.0, s2 * p.g, 2.0 * dc - 2.0 * i * ka,          // 2g
      pump_c, p.eta, 2.0 * dc - i * (ka + ga), s2 * p.g,           // 1e
      dc - i * ka, p.g, pump, s2 * p.eta;                          // 1g
  rhs << 0.0, 0.0, 0.0, -p.eta;

  Eigen::FullPivLU<Eigen::Matrix4cd> lu(m);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw SolverError("singular amplitude system at " + detail::describe(p));
  const Eigen::Vector4cd x = lu.solve(rhs);
  return {Complex(1.0, 0.0), x(0), x(1), x(2), x(3)};
}

/// Perturbative weak-drive solution with c0g = 1 and the decays implied by
/// the master equation. First order: c1g, c0e from the driven 1g and 0e
/// rows. Second order: c1e, c2g from the 1e and 2g rows sourced by the
/// first-order amplitudes. Tracks the master-equation steady state as
/// eta, omega_rabi -> 0 at fixed omega_rabi / eta.
inline AmplitudeSet solve_weak_drive(const SystemParams& params) {
  const SystemParams p = params.validated();
  const AmplitudeDecays d = master_equation_decays(p);
  const Complex i{0.0, 1.0};
  const double s2 = std::sqrt(2.0);
  const Complex pump_c = p.omega_rabi * std::polar(1.0, -p.theta);
  const double dc = p.delta_c;

  Eigen::Matrix2cd first;
  first << dc - i * d.cavity, p.g, p.g, dc - i * d.dot;
  Eigen::Vector2cd src1(-p.eta, -pump_c);
  Eigen::FullPivLU<Eigen::Matrix2cd> lu1(first);
  lu1.setThreshold(1e-13);
  if (!lu1.isInvertible()) throw SolverError("singular first-order block at " + detail::describe(p));
  const Eigen::Vector2cd x1 = lu1.solve(src1);

  // Unknown order: c1e, c2g.
  Eigen::Matrix2cd second;
  second << 2.0 * dc - i * (d.cavity + d.dot), s2 * p.g, s2 * p.g, 2.0 * dc - 2.0 * i * d.cavity;
  Eigen::Vector2cd src2(-(pump_c * x1(0) + p.eta * x1(1)), -s2 * p.eta * x1(0));
  Eigen::FullPivLU<Eigen::Matrix2cd> lu2(second);
  lu2.setThreshold(1e-13);
  if (!lu2.isInvertible()) throw SolverError("singular second-order block at " + detail::describe(p));
  const Eigen::Vector2cd x2 = lu2.solve(src2);
  return {Complex(1.0, 0.0), x1(0), x1(1), x2(0), x2(1)};
}

struct SteadyRelationResiduals {
  double via_pump;      // c1g + (W e^{i th} / eta) c0e
  double via_coupling;  // c1g + (g / eta) c1e
  double via_detuning;  // c1g + ((2 dc - i(kappa+gamma)) W e^{i th} / (W^2 - eta^2)) c1e

  double max() const { return std::max({via_pump, via_coupling, via_detuning}); }
};

/// Residuals of the three steady relations implied by c2g = 0. Throws when
/// omega_rabi^2 == eta^2, where the third relation is singular.
inline SteadyRelationResiduals steady_relations_check(const AmplitudeSet& c, const SystemParams& p) {
  if (!(p.eta > 0.0)) throw ValidationError("steady relations need eta > 0");
  const double denom = p.omega_rabi * p.omega_rabi - p.eta * p.eta;
  if (std::abs(denom) <= 1e-14 * std::max(1.0, p.eta * p.eta)) {
    throw SolverError("steady relation singular: omega_rabi^2 == eta^2");
  }
  const Complex i{0.0, 1.0};
  const Complex pump = p.omega_rabi * std::polar(1.0, p.theta);
  SteadyRelationResiduals r{};
  r.via_pump = std::abs(c.c1g + pump / p.eta * c.c0e);
  r.via_coupling = std::abs(c.c1g + p.g / p.eta * c.c1e);
  r.via_detuning = std::abs(c.c1g + (2.0 * p.delta_c - i * (p.kappa + p.gamma)) * pump / denom * c.c1e);
  return r;
}

/// Weak-drive g2(0) estimate 2 |c2g|^2 |c0g|^2 / |c1g|^4.
inline double analytic_g2_estimate(const AmplitudeSet& c) {
  const double p1 = std::norm(c.c1g);
  if (std::sqrt(p1) < 1e-14) throw SolverError("g2 estimate undefined: |c1g| vanishes");
  return 2.0 * std::norm(c.c2g) * std::norm(c.c0g) / (p1 * p1);
}

}  // namespace qiblockade
