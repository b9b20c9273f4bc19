#include "sobolev/analysis.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "sobolev/errors.hpp"
#include "sobolev/format.hpp"

namespace sobolev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BoundReport make_report(Theorem t, double lower, double upper, double computed, double tol) {
  BoundReport r;
  r.theorem = t;
  r.lower = lower;
  r.upper = upper;
  r.computed = computed;
  r.tol = tol;
  r.slack = std::min(computed - lower, upper - computed);
  r.pass = lower - tol <= computed && computed <= upper + tol;
  return r;
}

BoundReport not_applicable(Theorem t, double computed, double tol) {
  BoundReport r;
  r.theorem = t;
  r.lower = r.upper = std::numeric_limits<double>::quiet_NaN();
  r.computed = computed;
  r.tol = tol;
  r.applicable = false;
  r.slack = std::numeric_limits<double>::quiet_NaN();
  return r;
}

bool bounded_only_positive(const Potential& p) {
  return p.measure().is_zero() && essential_bounds(p).v0 > 0.0;
}

}  // namespace

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::comparison: return "comparison";
    case Theorem::perturbation: return "perturbation";
    case Theorem::delta: return "delta";
    case Theorem::nondecreasing: return "nondecreasing";
    case Theorem::invariance: return "invariance";
  }
  return "?";
}

BoundReport comparison_check(const Potential& p1, const Potential& p2, double m1, double m2,
                             double tol) {
  if (!pointwise_geq(p1, p2)) return not_applicable(Theorem::comparison, m2, tol);
  return make_report(Theorem::comparison, -kInf, m1, m2, tol);
}

PerturbationBounds perturbation_bounds(double base_m, const Measure& mu) {
  if (!std::isfinite(base_m)) throw InvalidInput("perturbation_bounds: base m must be finite");
  const auto tv = total_variation(mu);
  return {base_m - tv.minus, base_m + tv.plus, tv.tv};
}

BoundReport perturbation_check(double base_m, const Measure& mu, double perturbed_m, double tol) {
  const auto b = perturbation_bounds(base_m, mu);
  return make_report(Theorem::perturbation, b.lower, b.upper, perturbed_m, tol);
}

double delta_closed_form(double alpha, double beta) {
  if (!(alpha > 0.0)) throw InvalidInput("delta_closed_form: alpha must be positive");
  return 2.0 * std::sqrt(alpha) - std::max(-beta, 0.0);
}

BoundReport delta_check(double alpha, double beta, double computed, double tol) {
  const double m = delta_closed_form(alpha, beta);
  return make_report(Theorem::delta, m, m, computed, tol);
}

double best_constant(double m) {
  if (!(m > 0.0)) {
    throw NoInequality("best_constant: m = " + format_double(m) +
                       " <= 0, no Sobolev-type inequality holds");
  }
  return 1.0 / std::sqrt(m);
}

std::optional<double> nondecreasing_limit(const Potential& p) {
  if (!bounded_only_positive(p) || !p.bounded().is_nondecreasing()) return std::nullopt;
  return 2.0 * std::sqrt(essential_bounds(p).v0);
}

BoundReport nondecreasing_check(const Potential& p, double computed, double tol) {
  const auto m = nondecreasing_limit(p);
  if (!m) return not_applicable(Theorem::nondecreasing, computed, tol);
  return make_report(Theorem::nondecreasing, *m, *m, computed, tol);
}

BoundReport invariance_check(const Potential& p, const Measure& mu, double m_base, double m_pert,
                             double tol) {
  const bool monotone = p.bounded().is_nondecreasing() || p.bounded().is_nonincreasing();
  if (!bounded_only_positive(p) || !monotone || !mu.is_nonnegative()) {
    return not_applicable(Theorem::invariance, m_pert, tol);
  }
  return make_report(Theorem::invariance, m_base, m_base, m_pert, tol);
}

void write_bound_csv(std::ostream& os, const std::vector<BoundReport>& reports) {
  os << "theorem,lower,computed,upper,pass,slack\n";
  for (const auto& r : reports) {
    os << to_string(r.theorem) << ',' << format_double(r.lower) << ','
       << format_double(r.computed) << ',' << format_double(r.upper) << ','
       << (r.applicable ? (r.pass ? "true" : "false") : "n/a") << ',' << format_double(r.slack)
       << '\n';
  }
}

}  // namespace sobolev
