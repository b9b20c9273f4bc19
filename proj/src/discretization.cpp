#include "sobolev/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sobolev/errors.hpp"

namespace sobolev {

double Grid::max_width() const {
  double w = 0.0;
  for (Index e = 0; e + 1 < size(); ++e) w = std::max(w, width(e));
  return w;
}

Index Grid::find_node(double x) const {
  const double* begin = nodes.data();
  const double* end = begin + nodes.size();
  const double* it = std::lower_bound(begin, end, x);
  if (it == end || *it != x) return -1;
  return static_cast<Index>(it - begin);
}

double default_margin(const Potential& p) {
  const double v0 = min_tail(p);
  if (!(v0 > 0.0)) {
    throw InvalidPotential("tails must be positive for decaying minimizers");
  }
  return 25.0 / std::sqrt(v0);
}

double default_h_target(const Potential& p, double left, double right) {
  const double resolution = 0.01 / std::sqrt(std::max(1.0, max_abs_local(p)));
  return std::min(1e-3 * (right - left), resolution);
}

Grid build_grid(const Potential& p, double a, double margin, double h_target) {
  if (!(h_target > 0.0) || !std::isfinite(h_target)) {
    throw InvalidInput("build_grid: h_target must be positive");
  }
  if (!(margin > 0.0) || !std::isfinite(margin)) {
    throw InvalidInput("build_grid: margin must be positive");
  }
  if (!std::isfinite(a)) throw InvalidInput("build_grid: peak must be finite");

  std::vector<double> required;
  for (double x : p.bounded().breakpoints()) required.push_back(x);
  for (double x : p.density().breakpoints()) required.push_back(x);
  for (const auto& atom : p.atoms()) required.push_back(atom.location);
  std::sort(required.begin(), required.end());
  required.erase(std::unique(required.begin(), required.end()), required.end());

  double lo = a, hi = a;
  if (!required.empty()) {
    lo = std::min(lo, required.front());
    hi = std::max(hi, required.back());
  }
  Grid g;
  g.left = lo - margin;
  g.right = hi + margin;
  g.margin = margin;
  g.support_lo = lo;
  g.support_hi = hi;

  // Snap a nearly coincident peak onto an existing required node.
  const double snap = 1e-9 * (g.right - g.left);
  double peak = a;
  auto near = std::lower_bound(required.begin(), required.end(), a - snap);
  if (near != required.end() && std::abs(*near - a) <= snap) {
    peak = *near;
  } else {
    required.insert(std::upper_bound(required.begin(), required.end(), a), a);
  }

  std::vector<double> knots;
  knots.reserve(required.size() + 2);
  knots.push_back(g.left);
  knots.insert(knots.end(), required.begin(), required.end());
  knots.push_back(g.right);

  std::vector<double> nodes{g.left};
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double x0 = knots[k], x1 = knots[k + 1];
    const double len = x1 - x0;
    const auto pieces = std::max<long>(1, static_cast<long>(std::ceil(len / h_target - 1e-9)));
    for (long j = 1; j < pieces; ++j) {
      nodes.push_back(x0 + len * static_cast<double>(j) / static_cast<double>(pieces));
    }
    nodes.push_back(x1);
  }
  g.nodes = Eigen::Map<const Eigen::VectorXd>(nodes.data(), static_cast<Index>(nodes.size()));
  g.peak_index = g.find_node(peak);
  return g;
}

Grid build_grid(const Potential& p, double a, const GridOptions& options) {
  const double margin = options.margin ? *options.margin : default_margin(p);
  if (options.h_target) return build_grid(p, a, margin, *options.h_target);
  double lo = a, hi = a;
  if (auto hull = support_hull(p)) {
    lo = std::min(lo, hull->first);
    hi = std::max(hi, hull->second);
  }
  return build_grid(p, a, margin, default_h_target(p, lo - margin, hi + margin));
}

SymTridiagonal<double> QuadraticForm::combined() const {
  auto t = stiffness + weighted_mass;
  t.diag += atom_diag;
  return t;
}

QuadraticForm assemble(const Potential& p, const Grid& g) {
  const Index n = g.size();
  QuadraticForm f;
  f.stiffness = SymTridiagonal<double>::Zero(n);
  f.weighted_mass = SymTridiagonal<double>::Zero(n);
  f.atom_diag = Eigen::VectorXd::Zero(n);
  f.element_potential = Eigen::VectorXd::Zero(n > 0 ? n - 1 : 0);

  const auto local = p.local_part();
  for (Index e = 0; e + 1 < n; ++e) {
    const double w = g.width(e);
    const double v = local.value_on(g.nodes(e), g.nodes(e + 1));
    f.element_potential(e) = v;
    f.stiffness.diag(e) += 1.0 / w;
    f.stiffness.diag(e + 1) += 1.0 / w;
    f.stiffness.off(e) -= 1.0 / w;
    f.weighted_mass.diag(e) += v * w / 3.0;
    f.weighted_mass.diag(e + 1) += v * w / 3.0;
    f.weighted_mass.off(e) += v * w / 6.0;
  }
  for (const auto& atom : p.atoms()) {
    const Index i = g.find_node(atom.location);
    if (i < 0) {
      throw AssemblyContractViolation("atom location is not a grid node");
    }
    f.atom_diag(i) += atom.weight;
  }
  return f;
}

double energy(const QuadraticForm& f, const Eigen::VectorXd& u) {
  if (u.size() != f.size()) throw InvalidInput("energy: vector length differs from node count");
  return quadratic(f.stiffness, u) + quadratic(f.weighted_mass, u) +
         (f.atom_diag.array() * u.array().square()).sum();
}

H1Parts h1_parts(const Eigen::VectorXd& u, const Grid& g) {
  if (u.size() != g.size()) throw InvalidInput("h1_parts: vector length differs from node count");
  H1Parts out;
  for (Index e = 0; e + 1 < g.size(); ++e) {
    const double w = g.width(e);
    const double d = u(e + 1) - u(e);
    out.gradient_sq += d * d / w;
    out.l2_sq += w / 3.0 * (u(e) * u(e) + u(e) * u(e + 1) + u(e + 1) * u(e + 1));
  }
  return out;
}

bool embedding_check(const Eigen::VectorXd& u, const Grid& g) {
  if (u.size() == 0) return true;
  const auto parts = h1_parts(u, g);
  const double bound = std::sqrt(0.5 * (parts.gradient_sq + parts.l2_sq));
  return u.cwiseAbs().maxCoeff() <= bound * (1.0 + 1e-12) + 1e-300;
}

}  // namespace sobolev
