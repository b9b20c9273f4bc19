#pragma once

// Inner step of the two-step minimization:
//   F(a;V) = inf { I(u;V) : u in H^1, u(a) = ||u||_inf = 1 }.
// Three routes: a pinned linear solve, a box-constrained (obstacle) QP, and
// the grid-free transfer-matrix construction in transfer.hpp.

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "sobolev/discretization.hpp"
#include "sobolev/potential.hpp"

namespace sobolev {

enum class Method { linear, obstacle, transfer };

/// How much a reported value is worth:
///  exact         - closed-form transfer solution (grid-free)
///  global        - global minimizer of the discrete problem (SPD reduced matrix)
///  kkt_point     - KKT point of an indefinite discrete problem
///  non_converged - iteration budget exhausted; value is only an upper bound
enum class Certificate { exact, global, kkt_point, non_converged };

std::string_view to_string(Method m);
std::string_view to_string(Certificate c);
/// Accepts "linear", "obstacle", "transfer"; throws InvalidInput otherwise.
Method parse_method(std::string_view name);

struct InnerProblem {
  QuadraticForm form;
  Grid grid;
  Index peak_index = 0;
  double v0 = 0.0;  // ess inf of V0 over R (warm start decay)
};

InnerProblem make_inner_problem(const Potential& p, double a, const GridOptions& options = {});

struct InnerSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  double value = 0.0;  // F(a;V)
  double peak = 0.0;
  std::vector<Index> contact_set;  // indices with u = 1 other than the peak
  double kkt_residual = 0.0;
  long iterations = 0;
  int active_set_passes = 0;
  Method method = Method::linear;
  Certificate certificate = Certificate::global;
  bool converged = true;
};

/// Pinned tridiagonal solve u(a) = 1 on both sides of the peak. Applies when
/// both reduced blocks are SPD and the solution satisfies 0 < u <= 1 + slack;
/// otherwise throws MethodInapplicable.
InnerSolution solve_linear(const InnerProblem& pr, double feasibility_slack = 1e-12);

struct ObstacleOptions {
  double tol = 1e-8;  // on the KKT residual
  long max_iter = 1'000'000;
  double omega = 1.5;
  double feasibility_slack = 1e-12;
  /// Run the active-set phase before relaxation.
  bool accelerate = true;
  std::optional<Eigen::VectorXd> warm_start;
};

/// Minimize the discrete energy over -1 <= u <= 1 with u(peak) = 1 and zero
/// ends. Projected SOR when every reduced diagonal entry is positive, else
/// projected gradient with Armijo backtracking. Without a user warm start
/// the iteration starts from the clipped exponential e^{-sqrt(max(v0, 0.1))|x-a|}
/// when the reduced matrix is SPD, and from u = 1 otherwise.
InnerSolution solve_obstacle(const InnerProblem& pr, const ObstacleOptions& options = {});

/// Indices of nodes at u >= 1 - slack, excluding the peak and the ends.
std::vector<Index> contact_nodes(const Eigen::VectorXd& u, Index peak, double slack);

struct OdeCheckReport {
  bool applicable = true;
  bool positive = true;
  bool ode_ok = true;
  double min_u = 0.0;         // over the checked zone
  double max_residual = 0.0;  // of -u'' + V u off contact and peak
  Eigen::VectorXd residuals;  // per node, zero where not checked
  bool pass() const { return !applicable || (positive && ode_ok); }
};

/// Positivity at interior nodes within margin/2 of the support hull, and the
/// strong-form residual u'' - V u (three-point difference, atom jumps
/// subtracted) at nodes off the contact set, off the peak and off jumps of
/// V0 + density. Not applicable when a negative atom sits off the peak.
OdeCheckReport positivity_and_ode_check(const InnerSolution& sol, const InnerProblem& pr,
                                        double tol);

struct InnerOptions {
  std::optional<Method> method;  // nullopt: transfer, then linear, then obstacle
  GridOptions grid;
  ObstacleOptions obstacle;
};

/// F(a;V) by the requested method, or the cheapest applicable one.
InnerSolution solve_inner(const Potential& p, double a, const InnerOptions& options = {});

/// Two-column CSV with header `x,u`.
void write_profile_csv(std::ostream& os, const InnerSolution& sol);

}  // namespace sobolev
