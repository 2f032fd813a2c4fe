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

// System parameters, the rotating-frame Hamiltonian and closed-form results
// (dressed-state ladder, optimal interference conditions).
//
// Rates are angular frequencies. The CLI normalizes everything to kappa = 1;
// the library itself works with any kappa > 0.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "qiblockade/errors.hpp"
#include "qiblockade/hilbert.hpp"

namespace qiblockade {

/// How the rates of the doubled-form dissipator (rate/2) D[o] are read.
///
/// kHalf takes the master equation literally: the cavity field amplitude
/// decays at kappa/2 and the photon number at kappa. kFull doubles every
/// rate so the amplitude decays at kappa, matching the decay factors of the
/// two-photon amplitude equations.
enum class RateConvention { kHalf, kFull };

inline std::string to_string(RateConvention c) { return c == RateConvention::kHalf ? "half" : "full"; }

inline RateConvention parse_convention(const std::string& s) {
  if (s == "half") return RateConvention::kHalf;
  if (s == "full") return RateConvention::kFull;
  throw ValidationError("rate convention must be 'half' or 'full', got '" + s + "'");
}

/// Field-amplitude decay per unit of the nominal rate.
inline double amplitude_decay_factor(RateConvention c) { return c == RateConvention::kHalf ? 0.5 : 1.0; }

/// Wraps an angle into (-pi, pi].
inline double wrap_phase(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t <= -std::numbers::pi) t += two_pi;
  if (t > std::numbers::pi) t -= two_pi;
  return t;
}

struct SystemParams {
  double g = 2.0;
  double kappa = 1.0;
  double gamma = 0.05;
  double gamma_d = 0.0;
  double eta = 0.1;
  double omega_rabi = 0.0;
  double theta = 0.0;
  double delta_c = 2.0;
  int n_max = kDefaultNMax;
  RateConvention rate_convention = RateConvention::kHalf;

  /// Throws ValidationError naming the first offending field; wraps theta.
  SystemParams& validate() {
    auto finite = [](const char* name, double v) {
      if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
    };
    finite("g", g);
    finite("kappa", kappa);
    finite("gamma", gamma);
    finite("gamma_d", gamma_d);
    finite("eta", eta);
    finite("omega_rabi", omega_rabi);
    finite("theta", theta);
    finite("delta_c", delta_c);
    if (!(kappa > 0.0)) throw ValidationError("kappa must be > 0");
    if (gamma < 0.0) throw ValidationError("gamma must be >= 0");
    if (gamma_d < 0.0) throw ValidationError("gamma_d must be >= 0");
    if (eta < 0.0) throw ValidationError("eta must be >= 0");
    if (omega_rabi < 0.0) throw ValidationError("omega_rabi must be >= 0");
    if (g < 0.0) throw ValidationError("g must be >= 0");
    if (n_max < 2) throw ValidationError("n_max must be >= 2");
    theta = wrap_phase(theta);
    return *this;
  }

  SystemParams validated() const {
    SystemParams p = *this;
    p.validate();
    return p;
  }

  SpaceDims dims() const { return SpaceDims(n_max); }
};

/// Cavity-light detuning from lab-frame frequencies. The model only covers
/// omega_p == omega_L and omega_c == omega_a; anything else is rejected.
inline double detuning_from_lab(double omega_c, double omega_a, double omega_p, double omega_l,
                                double rel_tol = 1e-12) {
  auto same = [rel_tol](double x, double y) {
    return std::abs(x - y) <= rel_tol * std::max({1.0, std::abs(x), std::abs(y)});
  };
  if (!same(omega_p, omega_l)) throw ValidationError("cavity drive and QD pump frequencies must be equal");
  if (!same(omega_c, omega_a)) throw ValidationError("cavity and QD transition frequencies must be equal");
  return omega_c - omega_p;
}

/// H = dc (a'a + s_ee) + g (a' s_ge + a s_eg) + eta (a + a') + W (e^{i th} s_ge + e^{-i th} s_eg)
inline Operator build_hamiltonian(const SystemParams& p, const CompositeOperators& ops) {
  const Complex phase = std::polar(1.0, p.theta);
  const Matrix h = p.delta_c * (ops.num.data() + ops.sigma_ee.data()) +
                   p.g * (ops.a_dag.data() * ops.sigma_ge.data() + ops.a.data() * ops.sigma_eg.data()) +
                   p.eta * (ops.a.data() + ops.a_dag.data()) +
                   p.omega_rabi * (phase * ops.sigma_ge.data() + std::conj(phase) * ops.sigma_eg.data());
  return Operator(ops.dims, h);
}

inline Operator build_hamiltonian(const SystemParams& p) {
  SystemParams v = p.validated();
  return build_hamiltonian(v, CompositeOperators(v.dims()));
}

struct DressedPair {
  double minus;
  double plus;
};

/// Jaynes-Cummings ladder in the rotating frame: E_{n,+-} = n dc +- g sqrt(n).
inline DressedPair jc_eigenvalues(int n, const SystemParams& p) {
  if (n < 1) throw ValidationError("excitation number must be >= 1");
  const double split = p.g * std::sqrt(static_cast<double>(n));
  return {n * p.delta_c - split, n * p.delta_c + split};
}

/// Detuning of |2,-> from two-photon resonance when |1,-> is driven
/// resonantly (dc = g): (2 - sqrt 2) g.
inline double two_photon_gap(double g) {
  SystemParams p;
  p.g = g;
  p.delta_c = g;
  return jc_eigenvalues(2, p).minus;
}

struct OptimalConditions {
  double theta_opt_red;   // for dc = +g, in [0, pi/2]
  double theta_opt_blue;  // for dc = -g, in [pi/2, pi]
  double omega_opt;
  double r_value;
};

/// Closed-form interference optimum:
///   tan(theta) = (kappa + gamma) / 2g,
///   R = sqrt(4 + ((kappa + gamma)/g)^2),  Omega = eta (R + sqrt(R^2 + 4)) / 2.
/// Uses the nominal rates as written, independent of the rate convention.
inline OptimalConditions optimal_conditions(const SystemParams& p) {
  if (!(p.g > 0.0)) throw ValidationError("optimal conditions need g > 0");
  const double total = p.kappa + p.gamma;
  OptimalConditions c{};
  c.theta_opt_red = std::atan(total / (2.0 * p.g));
  c.theta_opt_blue = std::numbers::pi - c.theta_opt_red;
  const double ratio = total / p.g;
  c.r_value = std::sqrt(4.0 + ratio * ratio);
  c.omega_opt = p.eta * (c.r_value + std::sqrt(c.r_value * c.r_value + 4.0)) / 2.0;
  return c;
}

enum class Branch { kRed, kBlue };

/// Copy of p with (theta, omega_rabi, delta_c) set to the closed-form
/// optimum of the requested branch.
inline SystemParams at_optimum(SystemParams p, Branch branch) {
  const OptimalConditions c = optimal_conditions(p);
  p.omega_rabi = c.omega_opt;
  if (branch == Branch::kRed) {
    p.theta = c.theta_opt_red;
    p.delta_c = p.g;
  } else {
    p.theta = c.theta_opt_blue;
    p.delta_c = -p.g;
  }
  return p.validated();
}

}  // namespace qiblockade
