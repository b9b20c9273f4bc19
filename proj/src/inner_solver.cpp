#include "sobolev/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "sobolev/box_qp.hpp"
#include "sobolev/errors.hpp"
#include "sobolev/format.hpp"
#include "sobolev/transfer.hpp"

namespace sobolev {

namespace {

// Interior nodes other than the peak.
FreeMask free_rows(Index n, Index peak) {
  FreeMask mask(static_cast<std::size_t>(n), 1);
  if (n > 0) {
    mask.front() = 0;
    mask.back() = 0;
  }
  mask[static_cast<std::size_t>(peak)] = 0;
  return mask;
}

Eigen::VectorXd pinned_vector(Index n, Index peak) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  u(peak) = 1.0;
  return u;
}

void finish(InnerSolution& sol, const InnerProblem& pr, double slack) {
  sol.x = pr.grid.nodes;
  sol.peak = pr.grid.peak();
  sol.value = energy(pr.form, sol.u);
  sol.contact_set = contact_nodes(sol.u, pr.peak_index, slack);
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::linear: return "linear";
    case Method::obstacle: return "obstacle";
    case Method::transfer: return "transfer";
  }
  return "?";
}

std::string_view to_string(Certificate c) {
  switch (c) {
    case Certificate::exact: return "exact";
    case Certificate::global: return "global";
    case Certificate::kkt_point: return "kkt-point";
    case Certificate::non_converged: return "non-converged";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "linear") return Method::linear;
  if (name == "obstacle") return Method::obstacle;
  if (name == "transfer") return Method::transfer;
  throw InvalidInput("unknown inner method: " + std::string(name));
}

InnerProblem make_inner_problem(const Potential& p, double a, const GridOptions& options) {
  InnerProblem pr;
  pr.grid = build_grid(p, a, options);
  pr.form = assemble(p, pr.grid);
  pr.peak_index = pr.grid.peak_index;
  pr.v0 = essential_bounds(p).v0;
  return pr;
}

std::vector<Index> contact_nodes(const Eigen::VectorXd& u, Index peak, double slack) {
  std::vector<Index> out;
  for (Index i = 1; i + 1 < u.size(); ++i) {
    if (i != peak && u(i) >= 1.0 - slack) out.push_back(i);
  }
  return out;
}

InnerSolution solve_linear(const InnerProblem& pr, double feasibility_slack) {
  const auto a = pr.form.combined();
  const Index n = a.size();
  const Index p = pr.peak_index;
  if (!is_positive_definite(a, 1, p - 1) || !is_positive_definite(a, p + 1, n - 2)) {
    throw MethodInapplicable("solve_linear: reduced matrix has a non-positive pivot");
  }
  InnerSolution sol;
  sol.method = Method::linear;
  sol.certificate = Certificate::global;
  sol.u = pinned_vector(n, p);
  FreeMask fixed = free_rows(n, p);
  for (auto& f : fixed) f = !f;
  if (!solve_with_fixed(a, fixed, sol.u, true)) {
    throw MethodInapplicable("solve_linear: reduced matrix has a non-positive pivot");
  }
  for (Index i = 1; i + 1 < n; ++i) {
    if (!(sol.u(i) > 0.0) || sol.u(i) > 1.0 + feasibility_slack) {
      throw MethodInapplicable("solve_linear: pinned solution leaves (0, 1]");
    }
  }
  sol.kkt_residual = kkt_residual(a, free_rows(n, p), sol.u, -1.0, 1.0, feasibility_slack);
  sol.iterations = 1;
  finish(sol, pr, feasibility_slack);
  return sol;
}

InnerSolution solve_obstacle(const InnerProblem& pr, const ObstacleOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidInput("solve_obstacle: tol must be positive");
  if (!(options.omega > 0.0 && options.omega < 2.0)) {
    throw InvalidInput("solve_obstacle: omega must lie in (0, 2)");
  }
  const auto a = pr.form.combined();
  const Index n = a.size();
  const Index p = pr.peak_index;
  const double slack = options.feasibility_slack;
  const FreeMask mask = free_rows(n, p);

  bool diagonal_positive = true;
  for (Index i = 0; i < n; ++i) {
    if (mask[static_cast<std::size_t>(i)] && !(a.diag(i) > 0.0)) diagonal_positive = false;
  }
  const bool convex =
      is_positive_definite(a, 1, p - 1) && is_positive_definite(a, p + 1, n - 2);

  Eigen::VectorXd u;
  if (options.warm_start) {
    if (options.warm_start->size() != n) {
      throw InvalidInput("solve_obstacle: warm start length differs from node count");
    }
    u = options.warm_start->cwiseMax(-1.0).cwiseMin(1.0);
  } else if (convex) {
    const double rate = std::sqrt(pr.v0 > 0.0 ? pr.v0 : 0.1);
    const double peak = pr.grid.peak();
    u = (-rate * (pr.grid.nodes.array() - peak).abs()).exp().matrix();
  } else {
    u = Eigen::VectorXd::Ones(n);
  }
  u(0) = 0.0;
  u(n - 1) = 0.0;
  u(p) = 1.0;

  InnerSolution sol;
  sol.method = Method::obstacle;

  if (options.accelerate) {
    Eigen::VectorXd candidate = u;
    int passes = 0;
    if (active_set_solve(a, mask, candidate, -1.0, 1.0, slack, 200, passes) &&
        quadratic(a, candidate) <= quadratic(a, u)) {
      u = std::move(candidate);
    }
    sol.active_set_passes = passes;
  }

  double residual = kkt_residual(a, mask, u, -1.0, 1.0, slack);
  long it = 0;
  if (diagonal_positive) {
    while (residual > options.tol && it < options.max_iter) {
      projected_sor_sweep(a, mask, u, options.omega, -1.0, 1.0);
      residual = kkt_residual(a, mask, u, -1.0, 1.0, slack);
      ++it;
    }
  } else {
    // Gershgorin bound on the gradient Lipschitz constant 2 ||A||.
    double lipschitz = 0.0;
    for (Index i = 0; i < n; ++i) {
      double row = std::abs(a.diag(i));
      if (i > 0) row += std::abs(a.off(i - 1));
      if (i + 1 < n) row += std::abs(a.off(i));
      lipschitz = std::max(lipschitz, 2.0 * row);
    }
    double step = 1.0 / lipschitz;
    while (residual > options.tol && it < options.max_iter) {
      if (!projected_gradient_step(a, mask, u, step, -1.0, 1.0)) break;
      residual = kkt_residual(a, mask, u, -1.0, 1.0, slack);
      ++it;
    }
  }

  sol.u = std::move(u);
  sol.iterations = it;
  sol.kkt_residual = residual;
  sol.converged = residual <= options.tol;
  if (!sol.converged) sol.certificate = Certificate::non_converged;
  else sol.certificate = convex ? Certificate::global : Certificate::kkt_point;
  finish(sol, pr, slack);
  return sol;
}

OdeCheckReport positivity_and_ode_check(const InnerSolution& sol, const InnerProblem& pr,
                                        double tol) {
  OdeCheckReport rep;
  const auto& g = pr.grid;
  const Index n = g.size();
  const Index p = pr.peak_index;
  rep.residuals = Eigen::VectorXd::Zero(n);
  if (sol.u.size() != n) throw InvalidInput("positivity_and_ode_check: size mismatch");
  for (Index i = 0; i < n; ++i) {
    if (i != p && pr.form.atom_diag(i) < 0.0) {
      rep.applicable = false;
      return rep;
    }
  }

  std::vector<char> contact(static_cast<std::size_t>(n), 0);
  for (Index i : sol.contact_set) contact[static_cast<std::size_t>(i)] = 1;

  const double zone_lo = g.support_lo - 0.5 * g.margin;
  const double zone_hi = g.support_hi + 0.5 * g.margin;
  rep.min_u = std::numeric_limits<double>::infinity();
  for (Index i = 1; i + 1 < n; ++i) {
    if (g.nodes(i) >= zone_lo && g.nodes(i) <= zone_hi) {
      rep.min_u = std::min(rep.min_u, sol.u(i));
    }
    if (i == p || contact[static_cast<std::size_t>(i)]) continue;
    // u'' jumps where V does; the equation only holds off those nodes.
    if (pr.form.element_potential(i - 1) != pr.form.element_potential(i)) continue;
    const double wl = g.width(i - 1), wr = g.width(i);
    const double patch = 0.5 * (wl + wr);
    const double v = (pr.form.element_potential(i - 1) * wl + pr.form.element_potential(i) * wr) /
                     (wl + wr);
    const double jump = (sol.u(i + 1) - sol.u(i)) / wr - (sol.u(i) - sol.u(i - 1)) / wl;
    const double r = (jump - pr.form.atom_diag(i) * sol.u(i)) / patch - v * sol.u(i);
    rep.residuals(i) = r;
    rep.max_residual = std::max(rep.max_residual, std::abs(r));
  }
  rep.positive = rep.min_u > 0.0;
  rep.ode_ok = rep.max_residual <= tol;
  return rep;
}

InnerSolution solve_inner(const Potential& p, double a, const InnerOptions& options) {
  if (options.method == Method::transfer) {
    return solve_transfer(p, a, build_grid(p, a, options.grid));
  }
  if (!options.method) {
    try {
      return solve_transfer(p, a);
    } catch (const MethodInapplicable&) {
    }
  }
  const auto pr = make_inner_problem(p, a, options.grid);
  if (options.method == Method::obstacle) return solve_obstacle(pr, options.obstacle);
  if (options.method == Method::linear) return solve_linear(pr, options.obstacle.feasibility_slack);
  try {
    return solve_linear(pr, options.obstacle.feasibility_slack);
  } catch (const MethodInapplicable&) {
    return solve_obstacle(pr, options.obstacle);
  }
}

void write_profile_csv(std::ostream& os, const InnerSolution& sol) {
  os << "x,u\n";
  for (Index i = 0; i < sol.x.size(); ++i) {
    os << format_double(sol.x(i)) << ',' << format_double(sol.u(i)) << '\n';
  }
}

}  // namespace sobolev
