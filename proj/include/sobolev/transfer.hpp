#pragma once

// Grid-free inner solutions for piecewise-constant potentials with atoms.
//
// On each constant piece u'' = v u has closed-form fundamental solutions
// (cosh/sinh for v > 0, cos/sin for v < 0, affine for v = 0), and an atom of
// weight w makes u' jump by w u. Propagating the decaying tail solutions
// from -inf and +inf to the peak a and integrating by parts gives
//   F(a) = u'(a-) - u'(a+) + w_a     (profile normalized to u(a) = 1),
// valid when both normalized half-line solutions stay in (0, 1].

#include <vector>

#include "sobolev/discretization.hpp"
#include "sobolev/inner_solver.hpp"
#include "sobolev/potential.hpp"

namespace sobolev {

/// Normalized exact minimizer u_a, evaluable anywhere.
class ExactProfile {
 public:
  double peak() const { return peak_; }
  double value() const { return value_; }
  double operator()(double x) const;
  /// Derivative; one-sided from the left at knots.
  double derivative(double x) const;

 private:
  friend ExactProfile transfer_profile(const Potential& p, double a);

  struct State {
    double u = 0.0;
    double du = 0.0;
  };
  State state_at(double x) const;

  double peak_ = 0.0;
  double value_ = 0.0;
  double left_tail_ = 0.0;
  double right_tail_ = 0.0;
  std::vector<double> knots_;        // sorted, contains the peak
  std::vector<double> piece_value_;  // value on (knots_[j], knots_[j+1])
  std::vector<State> left_;          // state at knots_[j]+ for knots left of the peak
  std::vector<State> right_;         // state at knots_[j]- for knots right of the peak
  std::size_t peak_knot_ = 0;
};

/// Throws InvalidPotential when a tail is <= 0 and MethodInapplicable when a
/// normalized half-line solution leaves (0, 1].
ExactProfile transfer_profile(const Potential& p, double a);

/// F(a;V) and the profile sampled at the knots (breakpoints, atoms, peak).
InnerSolution solve_transfer(const Potential& p, double a);

/// Same, with the profile sampled at the nodes of g.
InnerSolution solve_transfer(const Potential& p, double a, const Grid& g);

}  // namespace sobolev
