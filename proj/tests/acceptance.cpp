// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "sobolev/analysis.hpp"
#include "sobolev/format.hpp"
#include "sobolev/inner_solver.hpp"
#include "sobolev/outer_solver.hpp"
#include "sobolev/transfer.hpp"

using namespace sobolev;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Potential constant_plus(double alpha, Measure mu) {
  return Potential(BoundedPart(PiecewiseConstant::constant(alpha)), std::move(mu));
}

std::map<std::string, std::string> run_cli(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  std::map<std::string, std::string> kv;
  std::istringstream lines(out.str());
  for (std::string l; std::getline(lines, l);) {
    const auto eq = l.find(" = ");
    if (eq != std::string::npos) kv.emplace(l.substr(0, eq), l.substr(eq + 3));
  }
  return kv;
}

double profile_error(const InnerSolution& s, double alpha) {
  double err = 0.0;
  for (Index i = 0; i < s.x.size(); ++i) {
    err = std::max(err, std::abs(s.u(i) - oracle::exp_profile(alpha, s.peak, s.x(i))));
  }
  return err;
}

Outcome ac1_constant() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "sobolev_acceptance";
  std::filesystem::create_directories(dir);
  double worst_m = 0.0, worst_u = 0.0;
  for (double alpha : {0.25, 1.0, 4.0}) {
    const auto cfg = (dir / "constant.cfg").string();
    std::ofstream(cfg) << "bounded.left_tail = " << format_double(alpha) << "\n";
    int code = -1;
    const auto kv = run_cli({"sobolev", "minimize", "--config", cfg}, code);
    o.require(code == 0, "minimize exit " + std::to_string(code));
    if (code != 0) continue;
    const double m = std::stod(kv.at("m_estimate"));
    worst_m = std::max(worst_m, std::abs(m - 2.0 * std::sqrt(alpha)));

    const auto pr = make_inner_problem(Potential::constant(alpha), 0.0);
    worst_u = std::max({worst_u, profile_error(solve_linear(pr), alpha),
                        profile_error(solve_obstacle(pr), alpha)});
  }
  std::filesystem::remove_all(dir);
  o.require(worst_m < 1e-3, "m error " + num(worst_m));
  o.require(worst_u < 1e-3, "profile error " + num(worst_u));
  o.detail = "max |m - 2 sqrt(alpha)| = " + num(worst_m) + ", max profile error = " + num(worst_u) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome ac2_delta() {
  Outcome o;
  double worst = 0.0, worst_discrete = 0.0;
  int cases = 0;
  for (double alpha : {0.5, 1.0, 4.0}) {
    for (double beta : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      if (2.0 * std::sqrt(alpha) + beta <= 0.0) continue;
      ++cases;
      const auto p = constant_plus(alpha, Measure({{0.0, beta}}));
      const auto r = minimize(p);
      const double exact = oracle::delta_m(alpha, beta);
      worst = std::max(worst, std::abs(r.m_estimate - exact));
      const std::string tag = "(" + num(alpha) + "," + num(beta) + ")";
      if (beta < 0.0) {
        o.require(std::abs(r.argmin) <= 1e-2, tag + " argmin " + num(r.argmin));
        o.require(r.attained == Attainment::interior, tag + " not interior");
      } else {
        o.require(r.attained == Attainment::boundary_suspect, tag + " not boundary-suspect");
      }
      // The discrete obstacle solver at the argmin must land on the same value.
      const auto s = solve_obstacle(make_inner_problem(p, r.argmin));
      worst_discrete = std::max(worst_discrete, std::abs(s.value - exact));
    }
  }
  o.require(cases == 15, "case count " + std::to_string(cases));
  o.require(worst < 1e-3, "m error " + num(worst));
  o.require(worst_discrete < 1e-3, "obstacle error " + num(worst_discrete));
  o.detail = std::to_string(cases) + " cases, max |m - closed form| = " + num(worst) +
             ", obstacle at argmin " + num(worst_discrete) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome ac3_step() {
  Outcome o;
  const Potential p(BoundedPart({0.0}, {}, 1.0, 4.0));
  const auto s = sweep(p, {-5.0, 5.0}, 0.1);
  o.require(s.size() >= 50, "samples " + std::to_string(s.size()));
  std::size_t violations = 0;
  for (std::size_t i = 1; i < s.size(); ++i) violations += s.F_values[i] > s.F_values[i - 1] ? 0 : 1;
  o.require(violations == 0, std::to_string(violations) + " non-increasing steps");
  const double edge = s.F_values.front();
  o.require(std::abs(edge - 2.0) <= 1e-2, "edge F " + num(edge));
  const auto r = minimize(p);
  o.require(r.attained == Attainment::boundary_suspect, "attainment interior");
  o.require(r.escape == Edge::left, "escape not left");
  o.detail = std::to_string(s.size()) + " samples strictly increasing, edge F = " + num(edge) +
             ", attained = " + std::string(to_string(r.attained)) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome ac4_trapped() {
  Outcome o;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double worst_cross = 0.0, worst_oracle = 0.0;
  for (auto [beta, width] : {std::pair{4.0, 2.0}, std::pair{pi2, 1.0}, std::pair{9.0, 1.5}}) {
    const WellParameters w{1.0, beta, -0.5 * width, 0.5 * width};
    const std::string tag = "(" + num(beta) + "," + num(width) + ")";
    o.require(trapped_mode_criterion(w), tag + " criterion false");
    const auto p = make_well(w);
    const auto r = minimize(p);
    o.require(r.attained == Attainment::interior, tag + " not interior");
    o.require(r.flagged_points == 0, tag + " flagged points");

    const auto pr = make_inner_problem(p, r.argmin);
    const double h = pr.grid.max_width();
    o.require(r.argmin >= w.b - h && r.argmin <= w.c + h, tag + " argmin " + num(r.argmin));

    const auto coarse = solve_obstacle(pr);
    GridOptions finer;
    finer.h_target = 0.5 * h;
    const auto fine = solve_obstacle(make_inner_problem(p, r.argmin, finer));
    o.require(coarse.converged && fine.converged, tag + " obstacle not converged");
    o.require(coarse.value >= r.m_estimate - 1e-12, tag + " obstacle value below m");
    worst_cross = std::max(worst_cross, std::abs(coarse.value - fine.value));
    worst_oracle = std::max(worst_oracle,
                            std::abs(r.m_estimate - oracle::well_plateau_value(1.0, beta, width)));
  }
  o.require(worst_cross <= 1e-3, "h vs h/2 " + num(worst_cross));
  o.require(worst_oracle <= 1e-3, "plateau oracle " + num(worst_oracle));
  o.detail = "3 wells interior, |F_h - F_h/2| = " + num(worst_cross) +
             ", |m - plateau oracle| = " + num(worst_oracle) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome ac5_perturbation() {
  Outcome o;
  gen::Rng rng(501);
  const double base = minimize(Potential::constant(1.0)).m_estimate;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const Measure mu(gen::density(rng, gen::uniform(rng, 0.05, 1.0)));
    const double m = minimize(constant_plus(1.0, mu)).m_estimate;
    const auto rep = perturbation_check(base, mu, m, 2e-3);
    o.require(rep.pass, "case " + std::to_string(k) + " dm " + num(m - base));
    worst = std::min(worst, rep.slack);
  }
  o.detail = "20 densities, min slack = " + num(worst) + (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome ac6_comparison() {
  Outcome o;
  gen::Rng rng(601);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const auto [upper, lower] = gen::dominated_pair(rng);
    const double m1 = minimize(upper).m_estimate, m2 = minimize(lower).m_estimate;
    const auto rep = comparison_check(upper, lower, m1, m2, 1e-3);
    o.require(rep.applicable, "pair " + std::to_string(k) + " not applicable");
    o.require(rep.pass, "pair " + std::to_string(k) + " m1 " + num(m1) + " m2 " + num(m2));
    worst = std::min(worst, rep.slack);
  }
  o.detail = "20 pairs, min slack = " + num(worst) + (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome ac7_methods() {
  Outcome o;
  gen::Rng rng(701);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto p = gen::positive_with_atoms(rng);
    const double a = gen::uniform(rng, -2.5, 2.5);
    const auto pr = make_inner_problem(p, a);
    const double lin = solve_linear(pr).value;
    const auto obs = solve_obstacle(pr);
    const double exact = solve_transfer(p, a).value;
    o.require(obs.converged, "case " + std::to_string(k) + " obstacle not converged");
    worst = std::max({worst, std::abs(lin - exact), std::abs(obs.value - exact), std::abs(lin - obs.value)});
  }
  o.require(worst < 1e-4, "max disagreement " + num(worst));
  o.detail = "20 potentials, max disagreement = " + num(worst) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome ac8_envelopes() {
  Outcome o;
  gen::Rng rng(801);
  double worst = 0.0;  // largest violation relative to the allowed slack
  for (int k = 0; k < 10; ++k) {
    const Potential p(gen::positive_bounded(rng));
    const double a = gen::uniform(rng, -2.0, 2.0);
    const auto b = essential_bounds(p);
    const auto s = solve_inner(p, a, InnerOptions{Method::obstacle, {}, {}});
    o.require(s.converged, "case " + std::to_string(k) + " not converged");
    double h = 0.0;
    for (Index i = 0; i + 1 < s.x.size(); ++i) h = std::max(h, s.x(i + 1) - s.x(i));
    const double slack = b.v1 * h * h + 1e-10;
    for (Index i = 1; i + 1 < s.x.size(); ++i) {
      const double d = std::abs(s.x(i) - a);
      const double below = std::exp(-std::sqrt(b.v1) * d) - s.u(i);
      const double above = s.u(i) - std::exp(-std::sqrt(b.v0) * d);
      worst = std::max(worst, std::max(below, above) / slack);
    }
  }
  o.require(worst <= 1.0, "violation " + num(worst) + " x slack");
  o.detail = "10 potentials, worst excess / (v1 h^2) = " + num(worst) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome ac9_order() {
  Outcome o;
  const auto p = Potential::constant(1.0);
  std::vector<double> err;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) {
    GridOptions g;
    g.h_target = h;
    err.push_back(std::abs(solve_linear(make_inner_problem(p, 0.0, g)).value - 2.0));
  }
  std::string ratios;
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double r = err[i - 1] / err[i];
    o.require(r >= 3.5, "ratio " + num(r));
    ratios += (i > 1 ? ", " : "") + num(r);
  }
  o.detail = "error ratios " + ratios + (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

Outcome ac10_invariance() {
  Outcome o;
  const Measure cases[] = {Measure({{0.0, 1.0}}), Measure({{2.0, 0.5}}),
                           Measure(DensityPart({-1.0, 1.0}, {2.0}))};
  const auto base = Potential::constant(1.0);
  double worst = 0.0;
  for (const auto& mu : cases) {
    const double m = minimize(base + mu).m_estimate;
    const auto rep = invariance_check(base, mu, 2.0, m, 1e-3);
    o.require(rep.applicable && rep.pass, "m = " + num(m));
    worst = std::max(worst, std::abs(m - 2.0));
  }
  o.detail = "3 perturbations, max |m - 2| = " + num(worst) + (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"AC1 constant potential closed form", ac1_constant},
      {"AC2 delta potential closed form", ac2_delta},
      {"AC3 non-decreasing step", ac3_step},
      {"AC4 trapped-mode wells", ac4_trapped},
      {"AC5 perturbation sandwich", ac5_perturbation},
      {"AC6 comparison monotonicity", ac6_comparison},
      {"AC7 inner method equivalence", ac7_methods},
      {"AC8 exponential envelopes", ac8_envelopes},
      {"AC9 second-order convergence", ac9_order},
      {"AC10 invariance under nonnegative perturbations", ac10_invariance},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1fs]\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str(), secs);
    std::fflush(stdout);
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
