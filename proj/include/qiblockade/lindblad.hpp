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

// Liouvillian on column-stacked density matrices, steady-state solve and
// time propagation.
//
//   vec(A X B) = (B^T (x) A) vec(X)
//   -i[H, rho]  ->  -i (I (x) H - H^T (x) I)
//   (r/2) D[o] rho = (r/2) (2 o rho o' - o'o rho - rho o'o)

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qiblockade/errors.hpp"
#include "qiblockade/hilbert.hpp"
#include "qiblockade/model.hpp"

namespace qiblockade {

inline Vector vectorize(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

inline Matrix unvectorize(const Vector& v, int d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

/// vec(I): the left null vector of every trace-preserving generator.
inline Vector trace_functional(int d) { return vectorize(Matrix::Identity(d, d)); }

class Superoperator {
 public:
  Superoperator(SpaceDims dims, Matrix data) : dims_(dims), data_(std::move(data)) {
    const Eigen::Index side = static_cast<Eigen::Index>(dims_.total_dim()) * dims_.total_dim();
    if (data_.rows() != side || data_.cols() != side) {
      throw ValidationError("superoperator shape does not match dims");
    }
  }

  const SpaceDims& dims() const { return dims_; }
  const Matrix& data() const { return data_; }
  int hilbert_dim() const { return dims_.total_dim(); }

  Matrix apply(const Matrix& rho) const { return unvectorize(data_ * vectorize(rho), hilbert_dim()); }

  /// max |vec(I)^dagger L|, zero for trace-preserving generators.
  double trace_defect() const {
    return (trace_functional(hilbert_dim()).adjoint() * data_).cwiseAbs().maxCoeff();
  }

  friend Superoperator operator+(const Superoperator& a, const Superoperator& b) {
    if (!(a.dims_ == b.dims_)) throw ValidationError("superoperator dimension mismatch");
    return Superoperator(a.dims_, a.data_ + b.data_);
  }

 private:
  SpaceDims dims_;
  Matrix data_;
};

namespace detail {

/// out += scale * (left (x) right), skipping zero entries of `left`.
inline void accumulate_kron(Matrix& out, Complex scale, const Matrix& left, const Matrix& right) {
  const Eigen::Index nb = right.rows();
  for (Eigen::Index j = 0; j < left.cols(); ++j) {
    for (Eigen::Index i = 0; i < left.rows(); ++i) {
      const Complex v = left(i, j);
      if (v == Complex(0.0, 0.0)) continue;
      out.block(i * nb, j * nb, nb, nb) += (scale * v) * right;
    }
  }
}

inline void accumulate_hamiltonian(Matrix& out, const Matrix& h) {
  const Eigen::Index d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Complex i{0.0, 1.0};
  accumulate_kron(out, -i, id, h);
  accumulate_kron(out, i, h.transpose(), id);
}

inline void accumulate_dissipator(Matrix& out, const Matrix& o, double scale) {
  if (scale == 0.0) return;
  const Eigen::Index d = o.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix od_o = o.adjoint() * o;
  accumulate_kron(out, 2.0 * scale, o.conjugate(), o);
  accumulate_kron(out, -scale, id, od_o);
  accumulate_kron(out, -scale, od_o.transpose(), id);
}

inline double dissipator_scale(double rate, RateConvention convention) {
  if (!(rate >= 0.0)) throw ValidationError("dissipation rate must be >= 0");
  return (convention == RateConvention::kFull ? 2.0 : 1.0) * rate / 2.0;
}

inline Matrix zero_superoperator(const SpaceDims& dims) {
  const Eigen::Index side = static_cast<Eigen::Index>(dims.total_dim()) * dims.total_dim();
  return Matrix::Zero(side, side);
}

}  // namespace detail

/// -i[H, .]
inline Superoperator hamiltonian_part(const Operator& h) {
  Matrix out = detail::zero_superoperator(h.dims());
  detail::accumulate_hamiltonian(out, h.data());
  return Superoperator(h.dims(), std::move(out));
}

/// (rate/2) D[o] with the rate read under `convention` (kFull doubles it).
inline Superoperator dissipator(const Operator& o, double rate,
                                RateConvention convention = RateConvention::kHalf) {
  const double scale = detail::dissipator_scale(rate, convention);
  Matrix out = detail::zero_superoperator(o.dims());
  detail::accumulate_dissipator(out, o.data(), scale);
  return Superoperator(o.dims(), std::move(out));
}

/// L = -i[H, .] + (kappa/2) D[a] + (gamma/2) D[s_ge] + (gamma_d/2) D[s_ee]
inline Superoperator build_liouvillian(const SystemParams& params, const CompositeOperators& ops) {
  const SystemParams p = params.validated();
  if (!(ops.dims == p.dims())) throw ValidationError("operator set does not match n_max");
  const RateConvention c = p.rate_convention;
  Matrix out = detail::zero_superoperator(ops.dims);
  detail::accumulate_hamiltonian(out, build_hamiltonian(p, ops).data());
  detail::accumulate_dissipator(out, ops.a.data(), detail::dissipator_scale(p.kappa, c));
  detail::accumulate_dissipator(out, ops.sigma_ge.data(), detail::dissipator_scale(p.gamma, c));
  detail::accumulate_dissipator(out, ops.sigma_ee.data(), detail::dissipator_scale(p.gamma_d, c));
  return Superoperator(ops.dims, std::move(out));
}

inline Superoperator build_liouvillian(const SystemParams& params) {
  return build_liouvillian(params, CompositeOperators(SpaceDims(params.n_max)));
}

enum class SteadyMethod { kSparseLU, kDenseLU };

struct SolverInfo {
  SteadyMethod method = SteadyMethod::kSparseLU;
  /// Reciprocal condition estimate of the bordered system (dense path only).
  double rcond = std::numeric_limits<double>::quiet_NaN();
  /// Sparse path: max |rho_a - rho_b| between solves that replace two
  /// different population rows. Large values flag a degenerate null space.
  double row_choice_spread = 0.0;
};

struct SteadyState {
  DensityMatrix rho;
  double residual;  // || L vec(rho) ||_2
  SolverInfo solver_info;
};

inline constexpr double kSteadyResidualTol = 1e-9;
inline constexpr double kMinSteadyRcond = 1e-13;
inline constexpr double kMaxRowChoiceSpread = 1e-8;

namespace detail {

inline Vector solve_bordered_sparse(const Matrix& l, const Vector& trace_row, Eigen::Index row) {
  using Sparse = Eigen::SparseMatrix<Complex>;
  const Eigen::Index n = l.rows();
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(n) * 16);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == row) continue;
      const Complex v = l(r, c);
      if (v != Complex(0.0, 0.0)) entries.emplace_back(r, c, v);
    }
    if (trace_row(c) != Complex(0.0, 0.0)) entries.emplace_back(row, c, trace_row(c));
  }
  Sparse m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  Eigen::SparseLU<Sparse, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) throw SolverError("steady state is not unique (singular bordered system)");
  Vector rhs = Vector::Zero(n);
  rhs(row) = 1.0;
  Vector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw SolverError("steady-state solve produced non-finite values");
  }
  return x;
}

}  // namespace detail

/// Unique trace-one null vector of L. A population row of L is replaced by
/// the trace functional and the bordered system is LU-solved. The sparse
/// path solves twice with different replaced rows and rejects the result if
/// the two disagree (degenerate null space).
inline SteadyState steady_state(const Superoperator& l, SteadyMethod method = SteadyMethod::kSparseLU) {
  const int d = l.hilbert_dim();
  const Eigen::Index n = l.data().rows();
  const Vector trace_row = trace_functional(d);
  SolverInfo info;
  info.method = method;
  Vector x;
  if (method == SteadyMethod::kDenseLU) {
    Matrix m = l.data();
    m.row(0) = trace_row.transpose();
    Vector rhs = Vector::Zero(n);
    rhs(0) = 1.0;
    Eigen::PartialPivLU<Matrix> lu(m);
    info.rcond = lu.rcond();
    if (!(info.rcond > kMinSteadyRcond)) {
      throw SolverError("steady state is not unique (rcond=" + std::to_string(info.rcond) + ")");
    }
    x = lu.solve(rhs);
    if (!x.allFinite()) throw SolverError("steady-state solve produced non-finite values");
  } else {
    x = detail::solve_bordered_sparse(l.data(), trace_row, 0);
    const Vector y = detail::solve_bordered_sparse(l.data(), trace_row, n - 1);
    info.row_choice_spread = (x - y).cwiseAbs().maxCoeff();
    if (!(info.row_choice_spread < kMaxRowChoiceSpread)) {
      throw SolverError("steady state is not unique (row-choice spread " +
                        std::to_string(info.row_choice_spread) + ")");
    }
  }
  Matrix rho = unvectorize(x, d);
  rho = 0.5 * (rho + rho.adjoint());
  const double residual = (l.data() * vectorize(rho)).norm();
  if (!(residual < kSteadyResidualTol)) {
    throw SolverError("steady-state residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return SteadyState{DensityMatrix(Operator(l.dims(), std::move(rho))), residual, info};
}

struct PropagateOptions {
  double rtol = 1e-10;
  double atol = 1e-13;
};

/// exp(L t) rho0 by adaptive Dormand-Prince 5(4). `max_step` caps the step
/// size. rho0 need not be a physical state.
inline Matrix propagate(const Superoperator& l, const Matrix& rho0, double t, double max_step,
                        PropagateOptions opt = {}) {
  if (!(t >= 0.0)) throw ValidationError("propagation time must be >= 0");
  if (!(max_step > 0.0)) throw ValidationError("step size must be > 0");
  const int d = l.hilbert_dim();
  if (rho0.rows() != d || rho0.cols() != d) throw ValidationError("initial operator has wrong shape");
  Vector y = vectorize(rho0);
  if (t == 0.0) return rho0;

  // Dormand-Prince tableau.
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  const Matrix& L = l.data();
  double time = 0.0;
  double h = std::min(max_step, t);
  Vector k1 = L * y, k2, k3, k4, k5, k6, k7, y_new;
  while (time < t) {
    h = std::min({h, max_step, t - time});
    if (h < 1e-14 * std::max(1.0, t)) throw SolverError("propagation step size underflow");
    k2 = L * (y + h * a21 * k1);
    k3 = L * (y + h * (a31 * k1 + a32 * k2));
    k4 = L * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = L * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = L * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = L * y_new;
    const Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const Eigen::ArrayXd scale = opt.atol + opt.rtol * y.cwiseAbs().array().max(y_new.cwiseAbs().array());
    const double err_norm = std::sqrt((err.cwiseAbs().array() / scale).square().mean());
    if (!std::isfinite(err_norm)) throw SolverError("propagation produced non-finite values");
    if (err_norm <= 1.0) {
      time += h;
      y.swap(y_new);
      k1.swap(k7);
    }
    const double factor = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
    h *= std::clamp(factor, 0.2, 5.0);
  }
  if (!y.allFinite()) throw SolverError("propagation produced non-finite values");
  return unvectorize(y, d);
}

/// Fixed-step propagator exp(L h), for uniform time grids.
class StepPropagator {
 public:
  StepPropagator(const Superoperator& l, double step) : d_(l.hilbert_dim()) {
    if (!(step > 0.0)) throw ValidationError("step size must be > 0");
    step_ = (l.data() * step).exp();
    if (!step_.allFinite()) throw SolverError("matrix exponential produced non-finite values");
  }

  Matrix advance(const Matrix& rho) const { return unvectorize(step_ * vectorize(rho), d_); }
  Vector advance(const Vector& v) const { return step_ * v; }

 private:
  int d_;
  Matrix step_;
};

/// Eigenvalues of L, sorted by descending real part.
inline std::vector<Complex> liouvillian_spectrum(const Superoperator& l) {
  Eigen::ComplexEigenSolver<Matrix> es(l.data(), false);
  if (es.info() != Eigen::Success) throw SolverError("Liouvillian eigen-decomposition failed");
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return a.real() > b.real(); });
  return ev;
}

}  // namespace qiblockade
