#pragma once

// P1 finite elements for I(u;V) = ||u'||^2 + V(u,u) on a truncated interval
// with homogeneous Dirichlet ends. The grid carries every breakpoint, atom and
// the peak as nodes, so the potential is constant on each element and atoms
// sit on nodes; assembly is then exact for piecewise-linear u.

#include <Eigen/Core>
#include <optional>

#include "sobolev/potential.hpp"
#include "sobolev/tridiagonal.hpp"

namespace sobolev {

struct Grid {
  double left = 0.0;
  double right = 0.0;
  Eigen::VectorXd nodes;
  Index peak_index = 0;
  double margin = 0.0;
  // Hull of the required nodes (breakpoints, atoms, peak).
  double support_lo = 0.0;
  double support_hi = 0.0;

  Index size() const { return nodes.size(); }
  double peak() const { return nodes(peak_index); }
  double width(Index element) const { return nodes(element + 1) - nodes(element); }
  double max_width() const;
  /// Index of the node equal to x, or -1.
  Index find_node(double x) const;
};

struct GridOptions {
  std::optional<double> margin;
  std::optional<double> h_target;
};

/// 25 / sqrt(min tail): the envelope e^{-sqrt(v0)|x-a|} is then below e^{-25}
/// at the ends. Throws InvalidPotential when a tail is not positive.
double default_margin(const Potential& p);

/// min(1e-3 (right - left), 0.01 / sqrt(max(1, max|V0 + density|))).
double default_h_target(const Potential& p, double left, double right);

/// Grid on [hull - margin, hull + margin] where hull spans a, every
/// breakpoint and every atom. Each gap between consecutive required nodes is
/// split uniformly into pieces no wider than h_target. A peak closer than
/// 1e-9 (right - left) to another required node is snapped onto it.
Grid build_grid(const Potential& p, double a, double margin, double h_target);
Grid build_grid(const Potential& p, double a, const GridOptions& options = {});

struct QuadraticForm {
  SymTridiagonal<double> stiffness;      // int u' v'
  SymTridiagonal<double> weighted_mass;  // int (V0 + density) u v
  Eigen::VectorXd atom_diag;             // atom weight at its node
  Eigen::VectorXd element_potential;     // V0 + density on each element

  Index size() const { return atom_diag.size(); }
  SymTridiagonal<double> combined() const;
};

/// Throws AssemblyContractViolation when an atom or breakpoint inside the
/// grid is not a node.
QuadraticForm assemble(const Potential& p, const Grid& g);

/// u^T (stiffness + weighted_mass + diag(atom_diag)) u.
double energy(const QuadraticForm& f, const Eigen::VectorXd& u);

struct H1Parts {
  double gradient_sq = 0.0;  // ||u'||^2
  double l2_sq = 0.0;        // ||u||^2
};

/// Exact H^1 pieces of the piecewise-linear interpolant of u.
H1Parts h1_parts(const Eigen::VectorXd& u, const Grid& g);

/// max|u| <= (1/sqrt 2) ||u||_{H^1} for the interpolant (sharp constant on R).
bool embedding_check(const Eigen::VectorXd& u, const Grid& g);

}  // namespace sobolev
