#pragma once

// Outer step: m(V) = inf over a of F(a;V).

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "sobolev/inner_solver.hpp"
#include "sobolev/potential.hpp"

namespace sobolev {

using Window = std::pair<double, double>;

struct SweepOptions {
  InnerOptions inner;
  unsigned jobs = 0;  // 0: hardware concurrency
};

struct SweepResult {
  std::vector<double> a_values;  // increasing
  std::vector<double> F_values;
  std::vector<Certificate> certificates;
  std::vector<Method> methods;
  std::size_t size() const { return a_values.size(); }
  bool flagged(std::size_t i) const { return certificates[i] == Certificate::non_converged; }
};

/// F at lo, lo + step, ..., hi (hi always included; the last gap may be
/// shorter). Points run concurrently; results are in input order. A point
/// whose inner solve did not converge keeps its (upper-bound) value and is
/// flagged with Certificate::non_converged.
SweepResult sweep(const Potential& p, Window window, double step, const SweepOptions& options = {});

struct RefineResult {
  double a_star = 0.0;
  double F_star = 0.0;
  bool sampled_min = false;  // bracket was not unimodal; best sample returned
  int evaluations = 0;
};

/// Golden-section search on [lo, hi] down to target_width. `best` is a known
/// sample (a, F), typically the sweep minimum; the result never exceeds it.
RefineResult refine(const Potential& p, Window bracket, double target_width,
                    const SweepOptions& options = {},
                    std::optional<std::pair<double, double>> best = std::nullopt);

enum class Attainment { interior, boundary_suspect };
enum class Edge { none, left, right };

struct MinimizeOptions {
  SweepOptions sweep;
  std::optional<Window> window;
  std::optional<double> step;          // default: window width / 200
  std::optional<double> refine_width;  // default: step / 1000
  /// The window is known to contain a minimizer, so an edge minimum counts
  /// as attained.
  bool trusted_window = false;
};

struct OuterResult {
  double m_estimate = 0.0;
  double argmin = 0.0;
  Edge escape = Edge::none;
  Attainment attained = Attainment::interior;
  double refinement_width = 0.0;
  bool sampled_min = false;
  Window window{0.0, 0.0};
  std::vector<double> minima;  // sampled a within tolerance of the minimum
  std::size_t flagged_points = 0;
  SweepResult samples;
};

/// Default sweep window: support hull extended by 10 / sqrt(min positive
/// tail), or [-e, e] with that extension when there is no hull.
Window default_window(const Potential& p);

/// Sweep, then golden-section refinement around an interior minimum.
/// Single wells satisfying the trapped-mode criterion are swept over [b, c]
/// unless a window is given. Throws NonConvergence when every point is flagged.
OuterResult minimize(const Potential& p, const MinimizeOptions& options = {});

struct WellParameters {
  double alpha = 1.0;  // value outside [b, c]
  double beta = 1.0;   // depth: value -beta inside
  double b = -1.0;
  double c = 1.0;
};

/// sqrt(beta) (c - b) >= pi. Throws InvalidInput unless alpha, beta > 0 and b < c.
bool trapped_mode_criterion(const WellParameters& well);
Potential make_well(const WellParameters& well);
/// Recognizes alpha outside, -beta inside, no measure part.
std::optional<WellParameters> as_single_well(const Potential& p);

std::string_view to_string(Attainment a);
std::string_view to_string(Edge e);

/// CSV with header `a,F,certificate`.
void write_sweep_csv(std::ostream& os, const SweepResult& s);
/// `key = value` lines.
void write_summary(std::ostream& os, const OuterResult& r);

}  // namespace sobolev
