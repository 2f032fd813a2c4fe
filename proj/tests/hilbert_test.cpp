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

#include "qiblockade/hilbert.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qiblockade;

namespace {

Matrix random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  return m;
}

}  // namespace

TEST(hilbert, space_dims) {
  SpaceDims d(10);
  EXPECT_EQ(d.total_dim(), 22);
  EXPECT_EQ(d.fock_dim(), 11);
  EXPECT_EQ(d.index(QdLevel::e, 3), 14);
  EXPECT_THROW(SpaceDims(1), ValidationError);
}

TEST(hilbert, fock_annihilation_elements) {
  const Matrix a = fock_annihilation(2);
  ASSERT_EQ(a.rows(), 3);
  EXPECT_EQ(a(0, 1), Complex(1.0));
  EXPECT_EQ(a(1, 2), Complex(std::sqrt(2.0)));
  EXPECT_EQ((a.array() != Complex(0.0)).count(), 2);

  Vector vac = Vector::Zero(3);
  vac(0) = 1.0;
  EXPECT_EQ((a * vac).norm(), 0.0);

  const Matrix num = fock_annihilation(6).adjoint() * fock_annihilation(6);
  for (int n = 0; n <= 6; ++n) EXPECT_NEAR(num(n, n).real(), n, 1e-14);
  EXPECT_NEAR((num - Matrix(num.diagonal().asDiagonal())).norm(), 0.0, 0.0);

  EXPECT_THROW(fock_annihilation(1), ValidationError);
}

TEST(hilbert, truncated_commutator_defect_is_confined_to_corner) {
  for (int n_max : {2, 5, 10}) {
    const Matrix a = fock_annihilation(n_max);
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    for (int i = 0; i <= n_max; ++i) {
      for (int j = 0; j <= n_max; ++j) {
        const double expected = i != j ? 0.0 : (i == n_max ? -static_cast<double>(n_max) : 1.0);
        EXPECT_NEAR(comm(i, j).real(), expected, 1e-13) << i << "," << j;
        EXPECT_EQ(comm(i, j).imag(), 0.0);
        if (i != j) EXPECT_EQ(comm(i, j), Complex(0.0));
      }
    }
  }
}

TEST(hilbert, qubit_projector_algebra) {
  const Matrix sge = qubit_lowering();
  const Matrix seg = sge.adjoint();
  Matrix pg = Matrix::Zero(2, 2), pe = Matrix::Zero(2, 2);
  pg(0, 0) = 1.0;
  pe(1, 1) = 1.0;
  EXPECT_EQ(sge * seg, pg);
  EXPECT_EQ(seg * sge, pe);
  EXPECT_EQ(sge * sge, Matrix::Zero(2, 2));
  EXPECT_EQ(sge * seg + seg * sge, Matrix::Identity(2, 2));
}

TEST(hilbert, tensor_shapes_and_embedding) {
  const SpaceDims d(4);
  const Matrix big = tensor(Matrix::Identity(2, 2), fock_annihilation(4));
  EXPECT_EQ(big.rows(), d.total_dim());
  EXPECT_EQ(big.cols(), d.total_dim());

  const CompositeOperators ops(d);
  const Matrix& see = ops.sigma_ee.data();
  EXPECT_EQ((see - Matrix(see.diagonal().asDiagonal())).norm(), 0.0);
  for (int i = 0; i < d.total_dim(); ++i) {
    EXPECT_TRUE(see(i, i) == Complex(0.0) || see(i, i) == Complex(1.0));
  }
  EXPECT_EQ(commutator(ops.a, ops.sigma_ge).data().norm(), 0.0);
  EXPECT_THROW(tensor(Matrix::Zero(2, 3), Matrix::Identity(2, 2)), ValidationError);
  EXPECT_THROW(embed(d, Matrix::Identity(3, 3), Matrix::Identity(5, 5)), ValidationError);
}

TEST(hilbert, tensor_is_associative_and_multiplicative) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(rng, 2), b = random_matrix(rng, 3), c = random_matrix(rng, 2),
                 dd = random_matrix(rng, 3), e = random_matrix(rng, 2);
    EXPECT_LT((tensor(tensor(a, b), e) - tensor(a, tensor(b, e))).norm(), 1e-12);
    EXPECT_LT((tensor(a, b) * tensor(c, dd) - tensor(a * c, b * dd)).norm(), 1e-12);
  }
}

TEST(hilbert, operator_rejects_wrong_shape) {
  EXPECT_THROW(Operator(SpaceDims(3), Matrix::Zero(7, 7)), ValidationError);
  EXPECT_THROW(Operator(SpaceDims(2), Matrix::Identity(6, 6)) * Operator(SpaceDims(3), Matrix::Identity(8, 8)),
               ValidationError);
}

TEST(hilbert, basis_states) {
  const SpaceDims d(10);
  const CompositeOperators ops(d);
  const DensityMatrix vac = basis_state(d, QdLevel::g, 0);
  EXPECT_NEAR(vac.data().trace().real(), 1.0, 0.0);
  EXPECT_EQ((vac.data() * vac.data() - vac.data()).norm(), 0.0);

  EXPECT_NEAR(ops.num.expectation(basis_state(d, QdLevel::g, 2).data()).real(), 2.0, 1e-14);
  EXPECT_NEAR(ops.sigma_ee.expectation(basis_state(d, QdLevel::e, 0).data()).real(), 1.0, 0.0);

  for (int n = 0; n <= d.n_max(); ++n) {
    for (QdLevel l : {QdLevel::g, QdLevel::e}) {
      const DensityCheck c = check_density(basis_state(d, l, n).data());
      EXPECT_EQ(c.hermiticity_error, 0.0);
      EXPECT_EQ(c.trace_error, 0.0);
      EXPECT_GE(c.min_eigenvalue, -1e-15);
    }
  }
  EXPECT_THROW(basis_state(d, QdLevel::g, 11), ValidationError);
  EXPECT_THROW(basis_state(d, QdLevel::e, -1), ValidationError);
}

TEST(hilbert, density_matrix_validation) {
  const SpaceDims d(2);
  Matrix m = Matrix::Zero(6, 6);
  m(0, 0) = 0.5;
  EXPECT_THROW(DensityMatrix(Operator(d, m)), ValidationError);
  m(1, 1) = 0.5;
  EXPECT_NO_THROW(DensityMatrix(Operator(d, m)));
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix(Operator(d, m)), ValidationError);
  m(0, 1) = 0.0;
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix(Operator(d, m)), ValidationError);
}
