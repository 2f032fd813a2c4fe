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

#include "qiblockade/observables.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <numeric>

using namespace qiblockade;

namespace {

SystemParams qi_optimum(int n_max = 10) {
  SystemParams p;
  p.n_max = n_max;
  return at_optimum(p, Branch::kRed);
}

}  // namespace

TEST(observables, fock_states) {
  const SpaceDims dims(6);
  EXPECT_EQ(photon_number(basis_state(dims, QdLevel::g, 0)), 0.0);
  EXPECT_THROW(g2_zero(basis_state(dims, QdLevel::g, 0)), SolverError);
  EXPECT_NEAR(g2_zero(basis_state(dims, QdLevel::g, 1)), 0.0, 1e-15);
  for (int n = 2; n <= 6; ++n) {
    EXPECT_NEAR(g2_zero(basis_state(dims, QdLevel::e, n)), 1.0 - 1.0 / n, 1e-14);
    EXPECT_NEAR(photon_number(basis_state(dims, QdLevel::e, n)), n, 1e-14);
  }
}

TEST(observables, thermal_state_bunches) {
  const SpaceDims dims(60);
  const double mean = 0.1;
  const double q = mean / (1.0 + mean);
  Matrix rho = Matrix::Zero(dims.total_dim(), dims.total_dim());
  for (int n = 0; n <= dims.n_max(); ++n) {
    rho(dims.index(QdLevel::g, n), dims.index(QdLevel::g, n)) = (1.0 - q) * std::pow(q, n);
  }
  const DensityMatrix thermal(Operator(dims, rho));
  EXPECT_NEAR(photon_number(thermal), mean, 1e-12);
  EXPECT_NEAR(g2_zero(thermal), 2.0, 1e-6);
}

TEST(observables, distribution_is_consistent_with_photon_number) {
  const ObservableRecord r = evaluate_point(qi_optimum());
  ASSERT_EQ(r.p_n.size(), 11u);
  EXPECT_NEAR(std::accumulate(r.p_n.begin(), r.p_n.end(), 0.0), 1.0, 1e-12);
  double mean = 0.0;
  for (std::size_t n = 0; n < r.p_n.size(); ++n) {
    EXPECT_GE(r.p_n[n], -1e-14);
    mean += static_cast<double>(n) * r.p_n[n];
  }
  EXPECT_NEAR(mean, r.n_c, 1e-12);
}

TEST(observables, blockade_suppresses_pairs) {
  const ObservableRecord r = evaluate_point(qi_optimum());
  EXPECT_NEAR(r.p_n[0], 0.94114, 5e-5);
  EXPECT_NEAR(r.p_n[1], 0.058837, 5e-6);
  EXPECT_NEAR(r.p_n[2], 2.59e-5, 5e-7);
  // Poissonian light with the same mean would have p2/p1 = n_c/2.
  EXPECT_LT(r.p_n[2] / r.p_n[1], 0.05 * r.n_c / 2.0);
}

TEST(observables, detuning_sign_and_phase_mirror) {
  for (RateConvention c : {RateConvention::kHalf, RateConvention::kFull}) {
    SystemParams p;
    p.rate_convention = c;
    p.n_max = 6;
    p.omega_rabi = 0.23;
    p.theta = 0.37;
    p.delta_c = 1.4;
    SystemParams mirror = p;
    mirror.theta = std::numbers::pi - p.theta;
    mirror.delta_c = -p.delta_c;
    const ObservableRecord a = evaluate_point(p);
    const ObservableRecord b = evaluate_point(mirror);
    EXPECT_NEAR(a.n_c, b.n_c, 1e-12);
    EXPECT_NEAR(*a.g2_0, *b.g2_0, 1e-10 * *a.g2_0);
  }
  const ObservableRecord red = evaluate_point(at_optimum(SystemParams{}, Branch::kRed));
  const ObservableRecord blue = evaluate_point(at_optimum(SystemParams{}, Branch::kBlue));
  EXPECT_NEAR(*red.g2_0, *blue.g2_0, 1e-10);
}

TEST(observables, record_is_empty_for_vacuum) {
  SystemParams p;
  p.eta = p.omega_rabi = 0.0;
  p.n_max = 3;
  const ObservableRecord r = evaluate_point(p);
  EXPECT_LT(r.n_c, kMinPhotonNumber);
  EXPECT_FALSE(r.g2_0.has_value());
  EXPECT_THROW(compute_g2_tau(p, 5.0, 11), SolverError);
}

TEST(observables, regression_at_zero_delay) {
  const Evaluation ev = evaluate(qi_optimum(6));
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const std::vector<double> g2 = g2_tau(ev.liouvillian, ev.steady.rho, grid);
  EXPECT_NEAR(g2[0], *ev.record.g2_0, 1e-12);
}

TEST(observables, uniform_and_adaptive_paths_agree) {
  const Evaluation ev = evaluate(qi_optimum(5));
  const std::vector<double> uniform{0.0, 0.4, 0.8, 1.2, 1.6, 2.0};
  const std::vector<double> ragged{0.0, 0.4, 0.8, 1.2, 1.6, 2.0, 2.05};
  const std::vector<double> a = g2_tau(ev.liouvillian, ev.steady.rho, uniform);
  const std::vector<double> b = g2_tau(ev.liouvillian, ev.steady.rho, ragged);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-8) << k;
}

TEST(observables, correlation_decays_to_one) {
  const Evaluation ev = evaluate(qi_optimum(5));
  const double gap = -liouvillian_spectrum(ev.liouvillian)[1].real();
  const std::vector<double> grid{0.0, 20.0 / gap};
  const std::vector<double> g2 = g2_tau(ev.liouvillian, ev.steady.rho, grid);
  EXPECT_NEAR(g2[1], 1.0, 1e-6);
}

TEST(observables, tau_grid_validation) {
  const Evaluation ev = evaluate(qi_optimum(3));
  const std::vector<double> descending{1.0, 0.5};
  const std::vector<double> negative{-1.0, 0.5};
  EXPECT_THROW(g2_tau(ev.liouvillian, ev.steady.rho, descending), ValidationError);
  EXPECT_THROW(g2_tau(ev.liouvillian, ev.steady.rho, negative), ValidationError);
  EXPECT_TRUE(g2_tau(ev.liouvillian, ev.steady.rho, std::vector<double>{}).empty());
}

TEST(observables, series_shape) {
  const G2TauSeries one = compute_g2_tau(qi_optimum(4), 10.0, 1);
  ASSERT_EQ(one.tau.size(), 1u);
  EXPECT_EQ(one.tau[0], 0.0);
  EXPECT_NEAR(one.g2[0], one.g2_zero, 1e-12);

  const G2TauSeries s = compute_g2_tau(qi_optimum(4), 4.0, 9);
  ASSERT_EQ(s.tau.size(), 9u);
  EXPECT_DOUBLE_EQ(s.tau[8], 4.0);
  EXPECT_DOUBLE_EQ(s.tau[1], 0.5);
  EXPECT_THROW(compute_g2_tau(qi_optimum(4), 0.0, 9), ValidationError);
  EXPECT_THROW(compute_g2_tau(qi_optimum(4), 1.0, 0), ValidationError);
}
