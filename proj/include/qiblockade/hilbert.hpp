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

// Truncated composite space: two-level quantum dot (QD) x cavity Fock space.
//
// Factor order is QD first, cavity second. A basis state |level, n> has
// flat index level * (n_max + 1) + n with level g = 0, e = 1.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <string>

#include "qiblockade/errors.hpp"

namespace qiblockade {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kTolHerm = 1e-10;
inline constexpr double kTolTrace = 1e-10;
inline constexpr double kTolPsd = 1e-8;
inline constexpr int kDefaultNMax = 10;

enum class QdLevel : int { g = 0, e = 1 };

class SpaceDims {
 public:
  explicit SpaceDims(int n_max = kDefaultNMax) : n_max_(n_max) {
    if (n_max < 2) {
      throw ValidationError("n_max must be >= 2, got " + std::to_string(n_max));
    }
  }

  int n_max() const { return n_max_; }
  int fock_dim() const { return n_max_ + 1; }
  int total_dim() const { return 2 * (n_max_ + 1); }

  int index(QdLevel level, int n) const {
    return static_cast<int>(level) * fock_dim() + n;
  }

  friend bool operator==(const SpaceDims&, const SpaceDims&) = default;

 private:
  int n_max_;
};

/// Dense operator on the composite space.
class Operator {
 public:
  Operator(SpaceDims dims, Matrix data) : dims_(dims), data_(std::move(data)) {
    if (data_.rows() != dims_.total_dim() || data_.cols() != dims_.total_dim()) {
      throw ValidationError("operator shape " + std::to_string(data_.rows()) + "x" +
                            std::to_string(data_.cols()) + " does not match total_dim " +
                            std::to_string(dims_.total_dim()));
    }
  }

  const SpaceDims& dims() const { return dims_; }
  const Matrix& data() const { return data_; }

  Operator adjoint() const { return Operator(dims_, data_.adjoint()); }
  Complex expectation(const Matrix& rho) const { return (data_ * rho).trace(); }

  friend Operator operator*(const Operator& a, const Operator& b) {
    check_same(a, b);
    return Operator(a.dims_, a.data_ * b.data_);
  }
  friend Operator operator+(const Operator& a, const Operator& b) {
    check_same(a, b);
    return Operator(a.dims_, a.data_ + b.data_);
  }
  friend Operator operator-(const Operator& a, const Operator& b) {
    check_same(a, b);
    return Operator(a.dims_, a.data_ - b.data_);
  }
  friend Operator operator*(Complex s, const Operator& a) {
    return Operator(a.dims_, s * a.data_);
  }

 private:
  static void check_same(const Operator& a, const Operator& b) {
    if (!(a.dims_ == b.dims_)) throw ValidationError("operator dimension mismatch");
  }

  SpaceDims dims_;
  Matrix data_;
};

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

/// Cavity annihilation operator on the (n_max+1)-dimensional Fock factor.
inline Matrix fock_annihilation(int n_max) {
  if (n_max < 2) throw ValidationError("n_max must be >= 2, got " + std::to_string(n_max));
  Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// sigma_ge = |g><e| in the (g, e) basis.
inline Matrix qubit_lowering() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

/// Kronecker product, left factor outermost.
inline Matrix tensor(const Matrix& left, const Matrix& right) {
  if (left.rows() != left.cols() || right.rows() != right.cols()) {
    throw ValidationError("tensor factors must be square");
  }
  if (left.size() == 0 || right.size() == 0) throw ValidationError("tensor factor is empty");
  return Eigen::kroneckerProduct(left, right).eval();
}

/// Embeds a QD factor and a cavity factor into the composite space.
inline Operator embed(const SpaceDims& dims, const Matrix& qd, const Matrix& cavity) {
  if (qd.rows() != 2 || cavity.rows() != dims.fock_dim()) {
    throw ValidationError("factor dimensions do not match the composite space");
  }
  return Operator(dims, tensor(qd, cavity));
}

/// The elementary operators of the composite space, built once per truncation.
struct CompositeOperators {
  explicit CompositeOperators(SpaceDims d)
      : dims(d),
        identity(d, Matrix::Identity(d.total_dim(), d.total_dim())),
        a(embed(d, Matrix::Identity(2, 2), fock_annihilation(d.n_max()))),
        sigma_ge(embed(d, qubit_lowering(), Matrix::Identity(d.fock_dim(), d.fock_dim()))),
        a_dag(a.adjoint()),
        sigma_eg(sigma_ge.adjoint()),
        sigma_ee(sigma_eg * sigma_ge),
        num(a_dag * a) {}

  SpaceDims dims;
  Operator identity;
  Operator a;
  Operator sigma_ge;
  Operator a_dag;
  Operator sigma_eg;
  Operator sigma_ee;
  Operator num;
};

struct DensityCheck {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok() const {
    return hermiticity_error <= kTolHerm && trace_error <= kTolTrace && min_eigenvalue >= -kTolPsd;
  }
};

inline DensityCheck check_density(const Matrix& rho) {
  DensityCheck c;
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  c.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

/// Trace-one Hermitian positive-semidefinite operator. Construction validates.
class DensityMatrix {
 public:
  explicit DensityMatrix(Operator op) : op_(std::move(op)) {
    DensityCheck c = check_density(op_.data());
    if (!c.ok()) {
      throw ValidationError("not a density matrix: herm=" + std::to_string(c.hermiticity_error) +
                            " trace=" + std::to_string(c.trace_error) +
                            " min_eig=" + std::to_string(c.min_eigenvalue));
    }
  }

  const Operator& op() const { return op_; }
  const Matrix& data() const { return op_.data(); }
  const SpaceDims& dims() const { return op_.dims(); }

 private:
  Operator op_;
};

inline DensityMatrix basis_state(const SpaceDims& dims, QdLevel level, int n_photons) {
  if (n_photons < 0 || n_photons > dims.n_max()) {
    throw ValidationError("photon number " + std::to_string(n_photons) + " outside [0, " +
                          std::to_string(dims.n_max()) + "]");
  }
  Matrix rho = Matrix::Zero(dims.total_dim(), dims.total_dim());
  const int i = dims.index(level, n_photons);
  rho(i, i) = 1.0;
  return DensityMatrix(Operator(dims, std::move(rho)));
}

}  // namespace qiblockade
