#include "commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "sobolev/analysis.hpp"
#include "sobolev/errors.hpp"
#include "sobolev/format.hpp"
#include "sobolev/inner_solver.hpp"
#include "sobolev/outer_solver.hpp"
#include "sobolev/transfer.hpp"

namespace sobolev::cli {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::unique_ptr<std::ofstream> open_output(const std::optional<std::string>& path) {
  if (!path) return nullptr;
  auto f = std::make_unique<std::ofstream>(*path);
  if (!*f) throw ConfigError("cannot write output file '" + *path + "'");
  return f;
}

// Data goes to --out when given, else after the summary on stdout.
std::ostream& data_stream(const std::unique_ptr<std::ofstream>& f, std::ostream& out) {
  return f ? static_cast<std::ostream&>(*f) : out;
}

void line(std::ostream& os, std::string_view key, double v) {
  os << key << " = " << format_double(v) << '\n';
}

template <class T>
void line(std::ostream& os, std::string_view key, const T& v) {
  os << key << " = " << v << '\n';
}

std::string seconds(const Stopwatch& clock) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", clock.seconds());
  return buf;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

double max_gap(const Eigen::VectorXd& x) {
  double h = 0.0;
  for (Index i = 0; i + 1 < x.size(); ++i) h = std::max(h, x(i + 1) - x(i));
  return h;
}

double minimized_m(const Potential& p, const RunConfig& cfg, std::size_t& flagged) {
  const auto r = minimize(p, cfg.minimize_options());
  flagged += r.flagged_points;
  return r.m_estimate;
}

}  // namespace

int cmd_inner(const RunConfig& cfg, std::ostream& out) {
  const Stopwatch clock;
  const auto p = cfg.resolved_potential();
  if (!cfg.a) throw ConfigError("inner: the peak 'a' is required");
  const auto opts = cfg.inner_options();
  auto sol = solve_inner(p, *cfg.a, opts);
  if (sol.method == Method::transfer && !opts.method) {
    sol = solve_transfer(p, *cfg.a, build_grid(p, *cfg.a, opts.grid));
  }
  auto file = open_output(cfg.out);
  line(out, "command", "inner");
  line(out, "a", sol.peak);
  line(out, "F", sol.value);
  line(out, "method", to_string(sol.method));
  line(out, "certificate", to_string(sol.certificate));
  line(out, "converged", yes_no(sol.converged));
  line(out, "kkt_residual", sol.kkt_residual);
  line(out, "iterations", sol.iterations);
  line(out, "active_set_passes", sol.active_set_passes);
  line(out, "nodes", sol.x.size());
  line(out, "h_max", max_gap(sol.x));
  line(out, "contact_nodes", sol.contact_set.size());
  line(out, "wall_time_s", seconds(clock));
  if (file) write_profile_csv(*file, sol);
  return sol.converged ? ok : non_convergence;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const Stopwatch clock;
  const auto p = cfg.resolved_potential();
  if (!cfg.window) throw ConfigError("sweep: 'window' is required");
  if (!cfg.step) throw ConfigError("sweep: 'step' is required");
  const auto s = sweep(p, *cfg.window, *cfg.step, cfg.sweep_options());
  auto file = open_output(cfg.out);

  std::size_t flagged = 0, best = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    flagged += s.flagged(i) ? 1 : 0;
    if (s.F_values[i] < s.F_values[best]) best = i;
  }
  line(out, "command", "sweep");
  line(out, "samples", s.size());
  line(out, "F_min", s.F_values[best]);
  line(out, "a_at_min", s.a_values[best]);
  line(out, "flagged_points", flagged);
  line(out, "wall_time_s", seconds(clock));
  write_sweep_csv(data_stream(file, out), s);
  return flagged == 0 ? ok : non_convergence;
}

int cmd_minimize(const RunConfig& cfg, std::ostream& out) {
  const Stopwatch clock;
  const auto p = cfg.resolved_potential();
  const auto r = minimize(p, cfg.minimize_options());
  auto file = open_output(cfg.out);
  line(out, "command", "minimize");
  write_summary(out, r);
  if (r.m_estimate > 0.0) {
    line(out, "best_constant", best_constant(r.m_estimate));
  } else {
    line(out, "notice", "no-inequality: m <= 0, no Sobolev-type inequality holds");
  }
  line(out, "wall_time_s", seconds(clock));
  if (file) write_sweep_csv(*file, r.samples);
  return r.flagged_points == 0 ? ok : non_convergence;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Stopwatch clock;
  const auto p = cfg.resolved_potential();
  const double tol = cfg.verify_tol;
  std::size_t flagged = 0;
  const double base_m = cfg.verify_base_m ? *cfg.verify_base_m : minimized_m(p, cfg, flagged);

  std::vector<BoundReport> reports;
  if (nondecreasing_limit(p)) reports.push_back(nondecreasing_check(p, base_m, tol));
  const bool constant_base = p.bounded().is_constant() && p.measure().is_zero();
  for (const auto& mu : cfg.perturbations) {
    const double m = minimized_m(p + mu, cfg, flagged);
    reports.push_back(perturbation_check(base_m, mu, m, tol));
    if (mu.is_nonnegative()) reports.push_back(invariance_check(p, mu, base_m, m, tol));
    if (constant_base && mu.density().is_zero() && mu.atoms().size() == 1) {
      reports.push_back(delta_check(p.bounded().left_tail(), mu.atoms()[0].weight, m, tol));
    }
  }
  for (const auto& c : cfg.comparisons) {
    const double m1 = minimized_m(c.upper, cfg, flagged);
    const double m2 = minimized_m(c.lower, cfg, flagged);
    reports.push_back(comparison_check(c.upper, c.lower, m1, m2, tol));
  }

  std::size_t failed = 0, skipped = 0;
  for (const auto& r : reports) {
    if (!r.applicable) ++skipped;
    else if (!r.pass) ++failed;
  }
  auto file = open_output(cfg.out);
  line(out, "command", "verify");
  line(out, "base_m", base_m);
  line(out, "reports", reports.size());
  line(out, "failed", failed);
  line(out, "not_applicable", skipped);
  line(out, "flagged_points", flagged);
  line(out, "wall_time_s", seconds(clock));
  write_bound_csv(data_stream(file, out), reports);
  if (failed > 0) return validation_failure;
  return flagged == 0 ? ok : non_convergence;
}

int cmd_trapped(const RunConfig& cfg, std::ostream& out) {
  const Stopwatch clock;
  const bool grid_mode = !cfg.trapped_betas.empty() || !cfg.trapped_widths.empty();
  if (grid_mode) {
    if (cfg.trapped_betas.empty() || cfg.trapped_widths.empty()) {
      throw ConfigError("trapped: both trapped.betas and trapped.widths are required");
    }
    auto opts = cfg.minimize_options();
    opts.window.reset();
    opts.step.reset();
    auto file = open_output(cfg.out);
    std::ostream& data = data_stream(file, out);
    std::ostringstream rows;
    std::size_t trapped = 0, flagged = 0;
    rows << "beta,width,criterion,attained,argmin\n";
    for (double beta : cfg.trapped_betas) {
      for (double w : cfg.trapped_widths) {
        const WellParameters well{cfg.trapped_alpha, beta, -0.5 * w, 0.5 * w};
        const bool criterion = trapped_mode_criterion(well);
        const auto r = minimize(make_well(well), opts);
        trapped += criterion ? 1 : 0;
        flagged += r.flagged_points;
        rows << format_double(beta) << ',' << format_double(w) << ',' << yes_no(criterion) << ','
             << to_string(r.attained) << ',' << format_double(r.argmin) << '\n';
      }
    }
    line(out, "command", "trapped");
    line(out, "mode", "grid");
    line(out, "rows", cfg.trapped_betas.size() * cfg.trapped_widths.size());
    line(out, "criterion_true", trapped);
    line(out, "flagged_points", flagged);
    line(out, "wall_time_s", seconds(clock));
    data << rows.str();
    return flagged == 0 ? ok : non_convergence;
  }

  std::optional<WellParameters> well = cfg.well;
  if (!well) well = as_single_well(cfg.resolved_potential());
  if (!well) throw ConfigError("trapped: the potential is not a single well (use well.*)");
  const bool criterion = trapped_mode_criterion(*well);
  auto opts = cfg.minimize_options();
  if (criterion && !opts.window) {
    opts.window = Window{well->b, well->c};
    opts.trusted_window = true;
  }
  const auto r = minimize(make_well(*well), opts);
  auto file = open_output(cfg.out);
  line(out, "command", "trapped");
  line(out, "mode", "single");
  line(out, "criterion", yes_no(criterion));
  line(out, "sqrt_beta_width", std::sqrt(well->beta) * (well->c - well->b));
  line(out, "claim", criterion ? "argmin in [b, c]" : "none");
  write_summary(out, r);
  line(out, "wall_time_s", seconds(clock));
  if (file) write_sweep_csv(*file, r.samples);
  return r.flagged_points == 0 ? ok : non_convergence;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sharp constants of Sobolev-type inequalities with generalized potentials"};
  app.set_help_flag("--help", "print this help");  // a short -h would clash with --h
  app.require_subcommand(1);

  std::string config_path, out_path, method;
  double h = 0.0, margin = 0.0, tol = 0.0;
  unsigned jobs = 0;
  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&);
  };
  const Sub subs[] = {
      {"inner", "F(a;V) and the minimizer profile at a fixed peak", cmd_inner},
      {"sweep", "F(a;V) over a window of peak locations", cmd_sweep},
      {"minimize", "m(V), its attainment and the best constant", cmd_minimize},
      {"verify", "check computed values against closed forms and bounds", cmd_verify},
      {"trapped", "trapped-mode criterion for a well or a parameter plane", cmd_trapped},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> registered;
  std::vector<CLI::Option*> o_out, o_h, o_margin, o_tol, o_method, o_jobs;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "config file (key = JSON value lines)")->required();
    o_out.push_back(sub->add_option("--out", out_path, "CSV output path"));
    o_h.push_back(sub->add_option("--h", h, "target element width"));
    o_margin.push_back(sub->add_option("--margin", margin, "truncation margin"));
    o_tol.push_back(sub->add_option("--tol", tol, "KKT residual tolerance"));
    o_method.push_back(sub->add_option("--method", method, "auto|linear|obstacle|transfer"));
    o_jobs.push_back(sub->add_option("--jobs", jobs, "worker threads"));
    registered.emplace_back(sub, &s);
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_error;
  }

  try {
    for (std::size_t k = 0; k < registered.size(); ++k) {
      auto* sub = registered[k].first;
      if (!sub->parsed()) continue;
      RunConfig cfg = load_config(config_path);
      if (o_out[k]->count()) cfg.out = out_path;
      if (o_h[k]->count()) cfg.h = require_positive("--h", h);
      if (o_margin[k]->count()) cfg.margin = require_positive("--margin", margin);
      if (o_tol[k]->count()) cfg.tol = require_positive("--tol", tol);
      if (o_method[k]->count()) cfg.method = parse_method_option(method);
      if (o_jobs[k]->count()) {
        if (jobs == 0) throw ConfigError("--jobs: must be at least 1");
        cfg.jobs = jobs;
      }
      return registered[k].second->fn(cfg, out);
    }
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return non_convergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }
  return config_error;
}

}  // namespace sobolev::cli
