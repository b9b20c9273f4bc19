#pragma once

// Run configuration: one `dotted.key = <JSON value>` per line, `#` comments.
//
//   bounded.breakpoints = [-1, 1]     # V0
//   bounded.values      = [-4]
//   bounded.left_tail   = 1
//   bounded.right_tail  = 1
//   density.breakpoints = [0, 1]      # L1 density, zero tails
//   density.values      = [0.5]
//   atoms = [[0, -1], [2, 0.5]]       # [location, weight] pairs
//   well.alpha = 1                    # alternative to bounded.*: alpha outside,
//   well.beta = 4                     # -beta on (b, c)
//   well.b = -1
//   well.c = 1
//   a = 0
//   window = [-5, 5]
//   step = 0.1
//   h_target = 0.005
//   margin = 20
//   tol = 1e-8
//   omega = 1.5
//   max_iter = 100000
//   method = auto                     # auto | linear | obstacle | transfer
//   jobs = 4
//   out = "curve.csv"
//   refine_width = 1e-6
//   verify.tol = 1e-3
//   verify.base_m = 2                 # skips computing m of the base potential
//   verify.perturbations = [{"atoms": [[0, -1]]}, {"density": {"breakpoints": [0, 1], "values": [0.5]}}]
//   verify.comparisons = [{"upper": 4, "lower": 1}]
//   trapped.alpha = 1                 # parameter-plane mode: wells centred at 0
//   trapped.betas = [1, 4, 9]
//   trapped.widths = [0.5, 1, 2]
//
// Values are JSON; a value that is not valid JSON is taken as a bare string.
// Unknown keys are rejected. Inside JSON values a potential is either a
// number (constant) or an object {"bounded": {...}, "density": {...}, "atoms": [...]}.

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sobolev/inner_solver.hpp"
#include "sobolev/outer_solver.hpp"
#include "sobolev/potential.hpp"

namespace sobolev {

struct Comparison {
  Potential upper;
  Potential lower;
};

struct RunConfig {
  std::optional<Potential> potential;
  std::optional<WellParameters> well;

  std::optional<double> a;
  std::optional<Window> window;
  std::optional<double> step;
  std::optional<double> h;
  std::optional<double> margin;
  std::optional<double> tol;
  std::optional<double> omega;
  std::optional<long> max_iter;
  std::optional<std::optional<Method>> method;  // inner nullopt: auto
  std::optional<unsigned> jobs;
  std::optional<std::string> out;
  std::optional<double> refine_width;

  double verify_tol = 1e-3;
  std::optional<double> verify_base_m;
  std::vector<Measure> perturbations;
  std::vector<Comparison> comparisons;

  double trapped_alpha = 1.0;
  std::vector<double> trapped_betas;
  std::vector<double> trapped_widths;

  /// The configured potential, or the well built from well.*. Throws
  /// ConfigError when neither is present.
  Potential resolved_potential() const;
  InnerOptions inner_options() const;
  SweepOptions sweep_options() const;
  MinimizeOptions minimize_options() const;
};

/// Throws ConfigError on syntax errors, unknown or duplicate keys, and
/// out-of-range values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Validators shared with command-line overrides; throw ConfigError.
double require_positive(std::string_view key, double v);
std::optional<Method> parse_method_option(std::string_view name);

Potential potential_from_json(const nlohmann::json& j);
nlohmann::json potential_to_json(const Potential& p);
Measure measure_from_json(const nlohmann::json& j);

}  // namespace sobolev
