#pragma once

// Closed forms and inequality checks applied to already-computed values of m.
// Nothing here runs a solver.

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "sobolev/potential.hpp"

namespace sobolev {

enum class Theorem { comparison, perturbation, delta, nondecreasing, invariance };
std::string_view to_string(Theorem t);

constexpr double kDefaultValidationTol = 1e-3;

struct BoundReport {
  double lower = 0.0;
  double upper = 0.0;
  double computed = 0.0;
  Theorem theorem = Theorem::comparison;
  double tol = kDefaultValidationTol;
  bool applicable = true;
  bool pass = false;  // lower - tol <= computed <= upper + tol
  double slack = 0.0; // min(computed - lower, upper - computed); negative when outside
};

/// Dominance p1 >= p2 implies m2 <= m1. Not applicable when pointwise_geq
/// cannot establish the dominance.
BoundReport comparison_check(const Potential& p1, const Potential& p2, double m1, double m2,
                             double tol = kDefaultValidationTol);

struct PerturbationBounds {
  double lower = 0.0;      // base_m - |mu_-|
  double upper = 0.0;      // base_m + |mu_+|
  double symmetric = 0.0;  // |mu|_TV, a cruder bound on |delta m|
};

/// Throws InvalidInput when base_m is not finite.
PerturbationBounds perturbation_bounds(double base_m, const Measure& mu);
BoundReport perturbation_check(double base_m, const Measure& mu, double perturbed_m,
                               double tol = kDefaultValidationTol);

/// m(alpha + beta delta) = 2 sqrt(alpha) - max(-beta, 0). Throws InvalidInput for alpha <= 0.
double delta_closed_form(double alpha, double beta);
BoundReport delta_check(double alpha, double beta, double computed,
                        double tol = kDefaultValidationTol);

/// m^{-1/2}; throws NoInequality for m <= 0.
double best_constant(double m);

/// 2 sqrt(v0) for a non-decreasing bounded part with positive infimum and no
/// measure part; nullopt otherwise.
std::optional<double> nondecreasing_limit(const Potential& p);
BoundReport nondecreasing_check(const Potential& p, double computed,
                                double tol = kDefaultValidationTol);

/// Monotone bounded p with positive infimum, no measure part, and mu >= 0:
/// passes iff |m_pert - m_base| <= tol.
BoundReport invariance_check(const Potential& p, const Measure& mu, double m_base, double m_pert,
                             double tol = kDefaultValidationTol);

/// Header `theorem,lower,computed,upper,pass,slack`; not-applicable rows
/// print `n/a` in the pass column.
void write_bound_csv(std::ostream& os, const std::vector<BoundReport>& reports);

}  // namespace sobolev
