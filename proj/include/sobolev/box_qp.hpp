#pragma once

// Kernels for  min u^T A u  over  lo <= u_i <= hi  on free rows, with A
// symmetric tridiagonal and the remaining rows pinned. Rows are "free" when
// mask[i] != 0.

#include <algorithm>
#include <cmath>
#include <vector>

#include "sobolev/tridiagonal.hpp"

namespace sobolev {

using FreeMask = std::vector<char>;

/// Complementarity residual of r = A u on free rows:
///   |r_i| off the bounds, max(r_i, 0) at the upper bound, max(-r_i, 0) at
///   the lower bound (the multiplier must push u back into the box).
template <class Scalar>
Scalar kkt_residual(const SymTridiagonal<Scalar>& a, const FreeMask& mask, const VectorX<Scalar>& u,
                    Scalar lo, Scalar hi, Scalar slack) {
  Scalar worst = 0;
  for (Index i = 0; i < a.size(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    const Scalar r = apply_row(a, u, i);
    Scalar viol;
    if (u(i) >= hi - slack) viol = std::max(r, Scalar(0));
    else if (u(i) <= lo + slack) viol = std::max(-r, Scalar(0));
    else viol = std::abs(r);
    worst = std::max(worst, viol);
  }
  return worst;
}

/// One forward projected SOR sweep. Each update is an exact (omega = 1) or
/// over-relaxed coordinate step followed by clipping; needs a(i,i) > 0.
template <class Scalar>
void projected_sor_sweep(const SymTridiagonal<Scalar>& a, const FreeMask& mask, VectorX<Scalar>& u,
                         Scalar omega, Scalar lo, Scalar hi) {
  for (Index i = 0; i < a.size(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    const Scalar r = apply_row(a, u, i);
    u(i) = std::clamp(u(i) - omega * r / a.diag(i), lo, hi);
  }
}

/// Projected gradient step with Armijo backtracking on E(u) = u^T A u.
/// `step` is updated in place (grown after success, shrunk on failure).
/// Returns false once the step underflows without descent.
template <class Scalar>
bool projected_gradient_step(const SymTridiagonal<Scalar>& a, const FreeMask& mask,
                             VectorX<Scalar>& u, Scalar& step, Scalar lo, Scalar hi) {
  const VectorX<Scalar> grad = Scalar(2) * apply(a, u);
  const Scalar e0 = quadratic(a, u);
  VectorX<Scalar> trial = u;
  for (int k = 0; k < 60; ++k) {
    for (Index i = 0; i < a.size(); ++i) {
      if (mask[static_cast<std::size_t>(i)]) trial(i) = std::clamp(u(i) - step * grad(i), lo, hi);
    }
    const VectorX<Scalar> d = trial - u;
    const Scalar e1 = quadratic(a, trial);
    if (e1 <= e0 + grad.dot(d) + d.squaredNorm() / (Scalar(2) * step)) {
      u = trial;
      step *= Scalar(1.5);
      return true;
    }
    step *= Scalar(0.5);
  }
  return false;
}

/// Primal-dual active-set iteration: rows at a bound are held there while
/// their multiplier has the right sign, released otherwise; free rows that
/// leave the box are added. Each pass solves the free tridiagonal blocks.
/// Returns true when the active sets stop changing; u then holds the
/// corresponding (clipped) iterate. `passes` receives the pass count.
template <class Scalar>
bool active_set_solve(const SymTridiagonal<Scalar>& a, const FreeMask& mask, VectorX<Scalar>& u,
                      Scalar lo, Scalar hi, Scalar slack, int max_passes, int& passes) {
  const Index n = a.size();
  std::vector<signed char> state(static_cast<std::size_t>(n), 0);  // +1 upper, -1 lower
  for (Index i = 0; i < n; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    if (u(i) >= hi - slack) state[static_cast<std::size_t>(i)] = 1;
    else if (u(i) <= lo + slack) state[static_cast<std::size_t>(i)] = -1;
  }
  VectorX<Scalar> trial = u;
  FreeMask fixed(static_cast<std::size_t>(n));
  for (passes = 1; passes <= max_passes; ++passes) {
    for (Index i = 0; i < n; ++i) {
      const auto s = static_cast<std::size_t>(i);
      fixed[s] = !mask[s] || state[s] != 0;
      if (state[s] == 1) trial(i) = hi;
      else if (state[s] == -1) trial(i) = lo;
    }
    if (!solve_with_fixed(a, fixed, trial, false)) return false;
    if (!trial.allFinite()) return false;
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      const auto s = static_cast<std::size_t>(i);
      if (!mask[s]) continue;
      const Scalar r = apply_row(a, trial, i);
      signed char next = 0;
      if (state[s] == 1) next = r <= Scalar(0) ? 1 : 0;
      else if (state[s] == -1) next = r >= Scalar(0) ? -1 : 0;
      if (next == 0) {
        if (trial(i) > hi + slack) next = 1;
        else if (trial(i) < lo - slack) next = -1;
      }
      changed = changed || next != state[s];
      state[s] = next;
    }
    if (!changed) {
      for (Index i = 0; i < n; ++i) {
        if (mask[static_cast<std::size_t>(i)]) trial(i) = std::clamp(trial(i), lo, hi);
      }
      u = trial;
      return true;
    }
  }
  passes = max_passes;
  return false;
}

}  // namespace sobolev
