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

#include "qiblockade/config.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

using namespace qiblockade;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(config, absolute_frequencies_are_scaled_by_kappa) {
  const SystemParams p = resolve(parse(
      "kappa_ghz = 20\n"
      "gamma_ghz = 1\n"
      "g = 2kappa\n"
      "eta = 0.1kappa\n"
      "delta_c = 1g\n"));
  EXPECT_DOUBLE_EQ(p.kappa, 1.0);
  EXPECT_DOUBLE_EQ(p.gamma, 0.05);
  EXPECT_DOUBLE_EQ(p.g, 2.0);
  EXPECT_DOUBLE_EQ(p.eta, 0.1);
  EXPECT_DOUBLE_EQ(p.delta_c, 2.0);
}

TEST(config, relative_units_resolve_against_earlier_quantities) {
  const SystemParams p = resolve(parse(
      "kappa = 1\n"
      "g = 3\n"
      "gamma = 0.1\n"
      "gamma_d = 0.5gamma\n"
      "eta = 0.05g\n"
      "omega_rabi = 2eta\n"
      "delta_c = -1g\n"
      "theta = 0.25pi\n"));
  EXPECT_DOUBLE_EQ(p.gamma_d, 0.05);
  EXPECT_DOUBLE_EQ(p.eta, 0.15);
  EXPECT_DOUBLE_EQ(p.omega_rabi, 0.3);
  EXPECT_DOUBLE_EQ(p.delta_c, -3.0);
  EXPECT_DOUBLE_EQ(p.theta, std::numbers::pi / 4.0);
}

TEST(config, defaults_fill_unset_quantities) {
  const SystemParams p = resolve(parse("kappa = 1\n"));
  EXPECT_DOUBLE_EQ(p.g, 2.0);
  EXPECT_DOUBLE_EQ(p.gamma, 0.05);
  EXPECT_DOUBLE_EQ(p.eta, 0.1);
  EXPECT_DOUBLE_EQ(p.delta_c, 2.0);
  EXPECT_EQ(p.n_max, 10);
  EXPECT_EQ(p.rate_convention, RateConvention::kHalf);
}

TEST(config, optimal_and_mode) {
  const SystemParams red = resolve(parse("kappa = 1\noptimal = red\n"));
  const OptimalConditions oc = optimal_conditions(red);
  EXPECT_DOUBLE_EQ(red.theta, oc.theta_opt_red);
  EXPECT_DOUBLE_EQ(red.omega_rabi, oc.omega_opt);

  const SystemParams blue = resolve(parse("kappa = 1\noptimal = blue\ndelta_c = -1g\n"));
  EXPECT_DOUBLE_EQ(blue.theta, oc.theta_opt_blue);
  EXPECT_DOUBLE_EQ(blue.delta_c, -2.0);

  // Axis overrides pin theta while the pump stays at its optimum.
  const Config cfg = parse("kappa = 1\noptimal = red\n");
  const SystemParams pinned = resolve(cfg, {{"theta", {0.5, Unit::kPi}}});
  EXPECT_DOUBLE_EQ(pinned.theta, std::numbers::pi / 2.0);
  EXPECT_DOUBLE_EQ(pinned.omega_rabi, oc.omega_opt);

  const SystemParams jc = resolve(parse("kappa = 1\nmode = jc\nomega_rabi = 0.3\n"));
  EXPECT_EQ(jc.omega_rabi, 0.0);
  EXPECT_NE(error_of("kappa = 1\nmode = jc\noptimal = red\n"), "");
}

TEST(config, run_settings) {
  const Config c = parse(
      "kappa = 1   # normalized\n"
      "\n"
      "n_max = 7\n"
      "convention = full\n"
      "outputs = n_c, g2_0, p_n\n"
      "tau_max = 12.5\n"
      "tau_points = 26\n");
  EXPECT_EQ(c.n_max, 7);
  EXPECT_EQ(c.convention, RateConvention::kFull);
  EXPECT_EQ(c.outputs, (std::vector<std::string>{"n_c", "g2_0", "p_n"}));
  EXPECT_EQ(c.tau_max, 12.5);
  EXPECT_EQ(c.tau_points, 26);
}

TEST(config, axes) {
  const Config c = parse(
      "kappa = 1\n"
      "axis1 = delta_c:-2g:2g:5\n"
      "axis2 = theta:0pi:1pi:3\n"
      "minimize_over = delta_c:0.5g:1.5g:11\n");
  ASSERT_TRUE(c.axis1 && c.axis2 && c.minimize_over);
  EXPECT_EQ(c.axis1->name, "delta_c");
  EXPECT_EQ(c.axis1->count, 5);
  EXPECT_EQ(c.axis1->start.unit, Unit::kG);
  EXPECT_DOUBLE_EQ(c.axis1->at(1).value, -1.0);
  EXPECT_DOUBLE_EQ(c.axis2->at(2).value, 1.0);
  EXPECT_EQ(c.axis2->at(2).unit, Unit::kPi);

  EXPECT_NE(error_of("kappa = 1\naxis1 = kappa:1:2:3\n").find("cannot be swept"), std::string::npos);
  EXPECT_NE(error_of("kappa = 1\naxis1 = g:1:2\n"), "");
  EXPECT_NE(error_of("kappa = 1\naxis1 = g:1:2:1\n"), "");
  EXPECT_NE(error_of("kappa = 1\naxis1 = delta_c:-2g:2:3\n"), "");
  EXPECT_NE(error_of("kappa = 1\naxis2 = g:1:2:3\n"), "");
}

TEST(config, lab_frequencies) {
  const SystemParams p = resolve(parse(
      "kappa_ghz = 20\n"
      "omega_c_ghz = 340040\n"
      "omega_a_ghz = 340040\n"
      "omega_p_ghz = 340000\n"
      "omega_l_ghz = 340000\n"));
  EXPECT_DOUBLE_EQ(p.delta_c, 2.0);
  EXPECT_NE(error_of("kappa_ghz = 20\nomega_c_ghz = 1\nomega_a_ghz = 1\nomega_p_ghz = 1\nomega_l_ghz = 2\n"), "");
  EXPECT_NE(error_of("kappa_ghz = 20\nomega_c_ghz = 1\n"), "");
}

TEST(config, errors_carry_line_numbers) {
  EXPECT_NE(error_of("kappa = 1\n\nfoo = 3\n").find("test.cfg:3"), std::string::npos);
  EXPECT_NE(error_of("kappa = 1\ng = 2 parsecs\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(error_of("kappa = 1\ng\n").find("test.cfg:2"), std::string::npos);
}

TEST(config, rejects_ambiguous_input) {
  EXPECT_NE(error_of("g = 2\n").find("missing kappa"), std::string::npos);
  EXPECT_NE(error_of("kappa = 2\n"), "");
  EXPECT_NE(error_of("kappa = 1\nkappa_ghz = 20\n").find("conflicts"), std::string::npos);
  EXPECT_NE(error_of("kappa_ghz = 20\ng = 2\ng_ghz = 40\n").find("conflicts"), std::string::npos);
  EXPECT_NE(error_of("kappa = 1\ntheta = 0.1\ntheta_pi = 0.1\n").find("conflicts"), std::string::npos);
  EXPECT_NE(error_of("kappa = 1\ng = 2\ng = 3\n").find("duplicate"), std::string::npos);
  EXPECT_NE(error_of("kappa = 1\ngamma_ghz = 1\n").find("needs kappa_ghz"), std::string::npos);
  EXPECT_NE(error_of("kappa = 1\ngamma = 0.5g\n"), "");
  EXPECT_NE(error_of("kappa = 1\nconvention = quarter\n"), "");
  EXPECT_NE(error_of("kappa = 1\noutputs = n_c, spin\n"), "");
  EXPECT_NE(error_of("kappa = 1\nn_max = 1\n"), "");
  EXPECT_NE(error_of("kappa_ghz = -3\n"), "");
}

TEST(config, resolve_validates) {
  EXPECT_THROW(resolve(parse("kappa = 1\ngamma = -0.1\n")), ValidationError);
}

TEST(config, missing_file) {
  EXPECT_THROW(load_config("/nonexistent/path.cfg"), ValidationError);
}
