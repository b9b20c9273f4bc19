#include "sobolev/outer_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <thread>

#include "sobolev/errors.hpp"
#include "sobolev/format.hpp"

namespace sobolev {

namespace {

struct Sample {
  double F = 0.0;
  Certificate certificate = Certificate::global;
  Method method = Method::linear;
};

Sample evaluate(const Potential& p, double a, const InnerOptions& options) {
  const auto sol = solve_inner(p, a, options);
  return {sol.value, sol.certificate, sol.method};
}

unsigned worker_count(unsigned requested, std::size_t work) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work, 1)));
}

double tie_tolerance(double m) { return 1e-9 * std::max(1.0, std::abs(m)); }

}  // namespace

SweepResult sweep(const Potential& p, Window window, double step, const SweepOptions& options) {
  const auto [lo, hi] = window;
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw InvalidInput("sweep: window must satisfy lo <= hi");
  }
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("sweep: step must be positive");

  SweepResult out;
  const auto gaps = static_cast<std::size_t>(std::max(0.0, std::ceil((hi - lo) / step - 1e-9)));
  for (std::size_t i = 0; i < gaps; ++i) out.a_values.push_back(lo + static_cast<double>(i) * step);
  out.a_values.push_back(hi);
  const std::size_t n = out.a_values.size();

  std::vector<Sample> samples(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        samples[i] = evaluate(p, out.a_values[i], options.inner);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = worker_count(options.jobs, n);
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& s : samples) {
    out.F_values.push_back(s.F);
    out.certificates.push_back(s.certificate);
    out.methods.push_back(s.method);
  }
  return out;
}

RefineResult refine(const Potential& p, Window bracket, double target_width,
                    const SweepOptions& options, std::optional<std::pair<double, double>> best) {
  auto [lo, hi] = bracket;
  if (!(lo < hi)) throw InvalidInput("refine: bracket must satisfy lo < hi");
  if (!(target_width > 0.0)) throw InvalidInput("refine: target width must be positive");

  RefineResult r;
  auto f = [&](double a) {
    ++r.evaluations;
    const double v = evaluate(p, a, options.inner).F;
    if (!best || v < best->second) best = std::make_pair(a, v);
    return v;
  };

  const double f_lo = f(lo), f_hi = f(hi);
  const double scale = std::max({1.0, std::abs(f_lo), std::abs(f_hi)});
  const double tol = 1e-12 * scale;
  const double edge_max = std::max(f_lo, f_hi);

  constexpr double g = std::numbers::phi - 1.0;  // 0.618...
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  auto check = [&](double v) {
    if (v > edge_max + tol) r.sampled_min = true;
  };
  check(f1);
  check(f2);
  // The bracket must hold an interior minimum for the search to mean anything.
  if (std::min(f1, f2) > std::min(f_lo, f_hi) + tol) r.sampled_min = true;

  while (hi - lo > target_width && !r.sampled_min) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
      check(f1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
      check(f2);
    }
  }
  r.a_star = best->first;
  r.F_star = best->second;
  return r;
}

Window default_window(const Potential& p) {
  const double lt = p.bounded().left_tail(), rt = p.bounded().right_tail();
  double tail = std::numeric_limits<double>::infinity();
  if (lt > 0.0) tail = std::min(tail, lt);
  if (rt > 0.0) tail = std::min(tail, rt);
  if (!std::isfinite(tail)) throw InvalidPotential("default_window: no positive tail");
  const double ext = 10.0 / std::sqrt(tail);
  const auto hull = support_hull(p);
  if (!hull) return {-ext, ext};
  return {hull->first - ext, hull->second + ext};
}

OuterResult minimize(const Potential& p, const MinimizeOptions& options) {
  OuterResult out;
  bool trusted = options.trusted_window;
  if (options.window) {
    out.window = *options.window;
  } else if (auto well = as_single_well(p); well && trapped_mode_criterion(*well)) {
    out.window = {well->b, well->c};
    trusted = true;
  } else {
    out.window = default_window(p);
  }
  const double width = out.window.second - out.window.first;
  const double step = options.step.value_or(width > 0.0 ? width / 200.0 : 1.0);
  out.samples = sweep(p, out.window, step, options.sweep);
  const auto& s = out.samples;
  const std::size_t n = s.size();

  for (std::size_t i = 0; i < n; ++i) out.flagged_points += s.flagged(i) ? 1 : 0;
  if (out.flagged_points == n) {
    throw NonConvergence("minimize: no sweep point converged");
  }

  const double sweep_min = *std::min_element(s.F_values.begin(), s.F_values.end());
  const double tol = tie_tolerance(sweep_min);
  std::size_t imin = 0;
  while (s.F_values[imin] > sweep_min + tol) ++imin;
  out.m_estimate = s.F_values[imin];
  out.argmin = s.a_values[imin];

  const bool at_edge = n == 1 || imin == 0 || imin + 1 == n;
  if (at_edge && !trusted) {
    out.attained = Attainment::boundary_suspect;
    // Heuristic: the five neighbours must decrease toward the edge.
    const double mono = 1e-12 * std::max(1.0, std::abs(out.m_estimate));
    bool monotone = true;
    for (std::size_t k = 0; k < 5 && k + 1 < n; ++k) {
      const std::size_t i = imin == 0 ? k : n - 1 - k;
      const std::size_t j = imin == 0 ? k + 1 : n - 2 - k;
      if (s.F_values[i] > s.F_values[j] + mono) monotone = false;
    }
    if (monotone) out.escape = imin == 0 ? Edge::left : Edge::right;
  } else {
    out.attained = Attainment::interior;
  }

  if (!at_edge) {
    const double target = options.refine_width.value_or(step * 1e-3);
    const auto r = refine(p, {s.a_values[imin - 1], s.a_values[imin + 1]}, target, options.sweep,
                          std::make_pair(out.argmin, out.m_estimate));
    out.sampled_min = r.sampled_min;
    out.refinement_width = target;
    if (r.F_star < out.m_estimate) {
      out.m_estimate = r.F_star;
      out.argmin = r.a_star;
    }
  }

  const double keep = out.m_estimate + tie_tolerance(out.m_estimate);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.F_values[i] <= keep) out.minima.push_back(s.a_values[i]);
  }
  if (std::find(out.minima.begin(), out.minima.end(), out.argmin) == out.minima.end()) {
    out.minima.push_back(out.argmin);
    std::sort(out.minima.begin(), out.minima.end());
  }
  return out;
}

bool trapped_mode_criterion(const WellParameters& w) {
  if (!(w.alpha > 0.0)) throw InvalidInput("well: alpha must be positive");
  if (!(w.beta > 0.0)) throw InvalidInput("well: beta must be positive");
  if (!(w.b < w.c)) throw InvalidInput("well: b must be less than c");
  return std::sqrt(w.beta) * (w.c - w.b) >= std::numbers::pi;
}

Potential make_well(const WellParameters& w) {
  return Potential(BoundedPart({w.b, w.c}, {-w.beta}, w.alpha, w.alpha));
}

std::optional<WellParameters> as_single_well(const Potential& p) {
  if (!p.measure().is_zero()) return std::nullopt;
  const auto f = p.bounded().simplified();
  if (f.breakpoints().size() != 2) return std::nullopt;
  const double alpha = f.left_tail(), inside = f.values()[0];
  if (f.right_tail() != alpha || !(alpha > 0.0) || !(inside < 0.0)) return std::nullopt;
  return WellParameters{alpha, -inside, f.breakpoints()[0], f.breakpoints()[1]};
}

std::string_view to_string(Attainment a) {
  return a == Attainment::interior ? "interior" : "boundary-suspect";
}

std::string_view to_string(Edge e) {
  switch (e) {
    case Edge::none: return "none";
    case Edge::left: return "left";
    case Edge::right: return "right";
  }
  return "?";
}

void write_sweep_csv(std::ostream& os, const SweepResult& s) {
  os << "a,F,certificate\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << format_double(s.a_values[i]) << ',' << format_double(s.F_values[i]) << ','
       << to_string(s.certificates[i]) << '\n';
  }
}

void write_summary(std::ostream& os, const OuterResult& r) {
  os << "m_estimate = " << format_double(r.m_estimate) << '\n'
     << "argmin = " << format_double(r.argmin) << '\n'
     << "attained = " << to_string(r.attained) << '\n'
     << "escape = " << to_string(r.escape) << '\n'
     << "window = [" << format_double(r.window.first) << ", " << format_double(r.window.second)
     << "]\n"
     << "samples = " << r.samples.size() << '\n'
     << "flagged_points = " << r.flagged_points << '\n'
     << "refinement_width = " << format_double(r.refinement_width) << '\n'
     << "refinement = "
     << (r.refinement_width == 0.0 ? "none" : r.sampled_min ? "sampled-min" : "golden-section")
     << '\n'
     << "minima_count = " << r.minima.size() << '\n';
  os << "minima = [";
  for (std::size_t i = 0; i < r.minima.size(); ++i) {
    os << (i ? ", " : "") << format_double(r.minima[i]);
  }
  os << "]\n";
}

}  // namespace sobolev
