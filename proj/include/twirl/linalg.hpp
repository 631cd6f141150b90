#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "twirl/types.hpp"

namespace twirl::linalg {

/// Kronecker product A ⊗ B with A's index as the slow one.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Trace inner product <A, B> = tr(A B*).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar trace_inner(const Eigen::MatrixBase<DerivedA>& a,
                                      const Eigen::MatrixBase<DerivedB>& b) {
  return (a.array() * b.conjugate().array()).sum();
}

/// Column-major vectorization of a matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vec(const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> copy = m;
  return Eigen::Map<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>(copy.data(), copy.size());
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> unvec(
    const Eigen::MatrixBase<Derived>& v, Eigen::Index rows, Eigen::Index cols) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> copy = v;
  return Eigen::Map<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>(copy.data(), rows,
                                                                                           cols);
}

/// ‖M M* − I‖_F
template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const auto n = m.rows();
  return (m * m.adjoint() - Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n)).norm();
}

/// ‖V* V − I‖_F for a matrix whose columns should be orthonormal.
template <typename Derived>
double orthonormality_defect(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const auto k = v.cols();
  return (v.adjoint() * v - Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(k, k)).norm();
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> hermitian_part(
    const Eigen::MatrixBase<Derived>& m) {
  return (m + m.adjoint()) / typename Derived::Scalar(2);
}

/// Scales so the largest-magnitude entry is real and positive. Ties resolve to
/// the first entry in column-major order.
template <typename Derived>
void fix_phase(Eigen::MatrixBase<Derived>& m) {
  using std::abs;
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double a = abs(m.derived().data()[i]);
    if (a > best_abs * (1.0 + 1e-12)) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs <= 0.0) return;
  const auto z = m.derived().data()[best];
  m.derived() *= std::conj(z) / abs(z);
}

/// Unitary polar factor W V* of M = W Σ V*.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> polar_unitary(
    const Eigen::MatrixBase<Derived>& m) {
  using MatrixType = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<MatrixType> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Numerical rank: number of singular values above rel_tol · σ_max.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& m, double rel_tol = 1e-8) {
  if (m.size() == 0) return 0;
  using MatrixType = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<MatrixType> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_tol * s(0)) ++r;
  }
  return r;
}

/// Orthonormal basis of the range of the columns of m (rank by relative
/// singular value threshold).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> orthonormal_range(
    const Eigen::MatrixBase<Derived>& m, double rel_tol = 1e-8) {
  using MatrixType = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.cols() == 0) return MatrixType(m.rows(), 0);
  Eigen::JacobiSVD<MatrixType> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(0) > 0.0 && s(i) > rel_tol * s(0)) ++r;
  }
  return svd.matrixU().leftCols(r);
}

/// Null space of a Hermitian positive semidefinite matrix: eigenvectors whose
/// eigenvalue is at most rel_tol · scale. Without a scale, λ_max is used
/// (absolute rel_tol if λ_max is 0).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> psd_null_space(
    const Eigen::MatrixBase<Derived>& q, double rel_tol = 1e-8, double scale = 0.0) {
  using MatrixType = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<MatrixType> es(q);
  const auto& ev = es.eigenvalues();
  const double top = ev.size() ? std::max(std::abs(ev(ev.size() - 1)), std::abs(ev(0))) : 0.0;
  const double ref = scale > 0.0 ? scale : top;
  const double cut = ref > 0.0 ? rel_tol * ref : rel_tol;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) <= cut) keep.push_back(i);
  }
  MatrixType out(q.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  return out;
}

/// Standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
template <typename Rng>
Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

template <typename Rng>
Matrix random_hermitian(Eigen::Index n, Rng& rng) {
  return hermitian_part(random_gaussian(n, n, rng));
}

template <typename Rng>
Vector random_unit_vector(Eigen::Index n, Rng& rng) {
  Vector v = random_gaussian(n, 1, rng);
  return v / v.norm();
}

/// Haar-distributed isometry with k orthonormal columns in C^n.
template <typename Rng>
Matrix random_isometry(Eigen::Index n, Eigen::Index k, Rng& rng) {
  Matrix g = random_gaussian(n, k, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, k);
  return q;
}

}  // namespace twirl::linalg
