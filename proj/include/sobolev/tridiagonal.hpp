#pragma once

// Symmetric tridiagonal matrices and the few kernels the solvers need.
// Dense types are Eigen column vectors templated on the scalar.

#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <vector>

namespace sobolev {

using Index = Eigen::Index;

template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
struct SymTridiagonal {
  VectorX<Scalar> diag;  // size n
  VectorX<Scalar> off;   // size n-1; off(i) couples rows i and i+1

  static SymTridiagonal Zero(Index n) {
    return {VectorX<Scalar>::Zero(n), VectorX<Scalar>::Zero(n > 0 ? n - 1 : 0)};
  }

  Index size() const { return diag.size(); }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> toDense() const {
    const Index n = size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    m.diagonal() = diag;
    for (Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off(i);
    return m;
  }
};

template <class Scalar>
SymTridiagonal<Scalar> operator+(const SymTridiagonal<Scalar>& a, const SymTridiagonal<Scalar>& b) {
  return {a.diag + b.diag, a.off + b.off};
}

/// Row i of T u.
template <class Scalar, class Derived>
Scalar apply_row(const SymTridiagonal<Scalar>& t, const Eigen::MatrixBase<Derived>& u, Index i) {
  Scalar r = t.diag(i) * u(i);
  if (i > 0) r += t.off(i - 1) * u(i - 1);
  if (i + 1 < t.size()) r += t.off(i) * u(i + 1);
  return r;
}

/// T u.
template <class Scalar, class Derived>
VectorX<Scalar> apply(const SymTridiagonal<Scalar>& t, const Eigen::MatrixBase<Derived>& u) {
  const Index n = t.size();
  VectorX<Scalar> r = t.diag.cwiseProduct(u);
  if (n > 1) {
    r.head(n - 1) += t.off.cwiseProduct(u.tail(n - 1));
    r.tail(n - 1) += t.off.cwiseProduct(u.head(n - 1));
  }
  return r;
}

/// u^T T u.
template <class Scalar, class Derived>
Scalar quadratic(const SymTridiagonal<Scalar>& t, const Eigen::MatrixBase<Derived>& u) {
  const Index n = t.size();
  Scalar s = (t.diag.array() * u.array().square()).sum();
  if (n > 1) s += Scalar(2) * (t.off.array() * u.head(n - 1).array() * u.tail(n - 1).array()).sum();
  return s;
}

namespace detail {

// LDL^T solve of the block [lo, hi] of t with right-hand side rhs(lo..hi),
// written in place into x(lo..hi). Returns false on a non-positive pivot
// (require_positive) or a pivot that is zero relative to the row scale.
template <class Scalar>
bool solve_block(const SymTridiagonal<Scalar>& t, Index lo, Index hi, const VectorX<Scalar>& rhs,
                 VectorX<Scalar>& x, bool require_positive, std::vector<Scalar>& work) {
  const Index n = hi - lo + 1;
  if (n <= 0) return true;
  work.assign(static_cast<std::size_t>(2 * n), Scalar(0));
  Scalar* d = work.data();      // pivots
  Scalar* y = work.data() + n;  // forward substitution
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (Index k = 0; k < n; ++k) {
    const Index i = lo + k;
    Scalar piv = t.diag(i);
    Scalar yi = rhs(i);
    if (k > 0) {
      const Scalar l = t.off(i - 1) / d[k - 1];
      piv -= l * t.off(i - 1);
      yi -= l * y[k - 1];
    }
    const Scalar scale = std::abs(t.diag(i)) + (i > 0 ? std::abs(t.off(i - 1)) : Scalar(0)) +
                         (i + 1 < t.size() ? std::abs(t.off(i)) : Scalar(0));
    if (require_positive ? !(piv > Scalar(0)) : !(std::abs(piv) > 1e3 * eps * scale)) return false;
    d[k] = piv;
    y[k] = yi;
  }
  x(hi) = y[n - 1] / d[n - 1];
  for (Index k = n - 2; k >= 0; --k) {
    const Index i = lo + k;
    x(i) = (y[k] - t.off(i) * x(i + 1)) / d[k];
  }
  return true;
}

}  // namespace detail

/// Solve T u = 0 on the rows not marked fixed, with u held at its current
/// values on fixed rows. Free rows form independent tridiagonal blocks.
/// Returns false if any block hits a bad pivot (see detail::solve_block).
template <class Scalar>
bool solve_with_fixed(const SymTridiagonal<Scalar>& t, const std::vector<char>& fixed,
                      VectorX<Scalar>& u, bool require_positive) {
  const Index n = t.size();
  VectorX<Scalar> rhs = VectorX<Scalar>::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (fixed[static_cast<std::size_t>(i)]) continue;
    if (i > 0 && fixed[static_cast<std::size_t>(i - 1)]) rhs(i) -= t.off(i - 1) * u(i - 1);
    if (i + 1 < n && fixed[static_cast<std::size_t>(i + 1)]) rhs(i) -= t.off(i) * u(i + 1);
  }
  std::vector<Scalar> work;
  Index i = 0;
  while (i < n) {
    if (fixed[static_cast<std::size_t>(i)]) {
      ++i;
      continue;
    }
    Index j = i;
    while (j + 1 < n && !fixed[static_cast<std::size_t>(j + 1)]) ++j;
    if (!detail::solve_block(t, i, j, rhs, u, require_positive, work)) return false;
    i = j + 1;
  }
  return true;
}

/// True iff the principal block [lo, hi] is positive definite (all LDL^T
/// pivots positive, Sylvester). An empty block counts as definite.
template <class Scalar>
bool is_positive_definite(const SymTridiagonal<Scalar>& t, Index lo, Index hi) {
  Scalar prev = 0;
  for (Index i = lo; i <= hi; ++i) {
    Scalar piv = t.diag(i);
    if (i > lo) piv -= t.off(i - 1) * t.off(i - 1) / prev;
    if (!(piv > Scalar(0))) return false;
    prev = piv;
  }
  return true;
}

}  // namespace sobolev
