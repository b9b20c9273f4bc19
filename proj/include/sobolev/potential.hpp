#pragma once

// Generalized potentials V = V0 + V1 on the real line.
//
// V0 is a bounded piecewise-constant function with constant tails. V1 is a
// signed measure with finite total variation, represented as a compactly
// supported piecewise-constant density plus finitely many Dirac atoms. The
// energy pairing is V(u,u) = int V0 u^2 dx + int density u^2 dx + sum w u(x)^2.

#include <optional>
#include <utility>
#include <vector>

namespace sobolev {

/// Piecewise-constant function of one real variable.
///
/// `values[i]` holds on (breakpoints[i], breakpoints[i+1]); the tails hold on
/// (-inf, breakpoints.front()) and (breakpoints.back(), inf). With no
/// breakpoints the function is the constant left_tail == right_tail.
class PiecewiseConstant {
 public:
  PiecewiseConstant() = default;
  PiecewiseConstant(std::vector<double> breakpoints, std::vector<double> values,
                    double left_tail, double right_tail);

  static PiecewiseConstant constant(double value);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  double left_tail() const { return left_tail_; }
  double right_tail() const { return right_tail_; }

  /// Value at x; right-continuous at breakpoints.
  double operator()(double x) const;

  /// Value on the open piece (lo, hi); throws if a breakpoint lies inside.
  double value_on(double lo, double hi) const;

  bool is_constant() const;
  bool is_nondecreasing() const;
  bool is_nonincreasing() const;
  bool is_zero() const;

  /// Drop breakpoints whose two sides carry the same value.
  PiecewiseConstant simplified() const;
  PiecewiseConstant shifted(double h) const;

  friend bool operator==(const PiecewiseConstant&, const PiecewiseConstant&) = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double left_tail_ = 0.0;
  double right_tail_ = 0.0;
};

PiecewiseConstant operator+(const PiecewiseConstant& a, const PiecewiseConstant& b);
PiecewiseConstant operator-(const PiecewiseConstant& a);
PiecewiseConstant operator-(const PiecewiseConstant& a, const PiecewiseConstant& b);

/// The L-infinity part V0.
class BoundedPart : public PiecewiseConstant {
 public:
  BoundedPart() = default;
  explicit BoundedPart(PiecewiseConstant f) : PiecewiseConstant(std::move(f)) {}
  BoundedPart(std::vector<double> breakpoints, std::vector<double> values,
              double left_tail, double right_tail)
      : PiecewiseConstant(std::move(breakpoints), std::move(values), left_tail,
                          right_tail) {}
};

/// Compactly supported L1 density; both tails are zero.
class DensityPart : public PiecewiseConstant {
 public:
  DensityPart() = default;
  DensityPart(std::vector<double> breakpoints, std::vector<double> values)
      : PiecewiseConstant(std::move(breakpoints), std::move(values), 0.0, 0.0) {}
  /// Throws InvalidInput when f has a non-zero tail.
  explicit DensityPart(PiecewiseConstant f);

  double total_variation() const;
  double positive_mass() const;
  double negative_mass() const;  // magnitude of the negative part
};

struct Atom {
  double location = 0.0;
  double weight = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Signed measure part V1: density plus atoms. Atoms are kept sorted by
/// location, with weights at coinciding locations summed.
class Measure {
 public:
  Measure() = default;
  explicit Measure(DensityPart density, std::vector<Atom> atoms = {});
  explicit Measure(std::vector<Atom> atoms) : Measure(DensityPart{}, std::move(atoms)) {}

  const DensityPart& density() const { return density_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  bool is_zero() const;
  bool is_nonnegative() const;
  Measure shifted(double h) const;

  friend bool operator==(const Measure&, const Measure&) = default;

 private:
  DensityPart density_;
  std::vector<Atom> atoms_;
};

Measure operator+(const Measure& a, const Measure& b);
Measure operator-(const Measure& a);

class Potential {
 public:
  Potential() = default;
  explicit Potential(BoundedPart bounded, Measure measure = {})
      : bounded_(std::move(bounded)), measure_(std::move(measure)) {}
  Potential(BoundedPart bounded, DensityPart density, std::vector<Atom> atoms = {})
      : bounded_(std::move(bounded)),
        measure_(std::move(density), std::move(atoms)) {}

  static Potential constant(double value) {
    return Potential(BoundedPart(PiecewiseConstant::constant(value)));
  }

  const BoundedPart& bounded() const { return bounded_; }
  const Measure& measure() const { return measure_; }
  const DensityPart& density() const { return measure_.density(); }
  const std::vector<Atom>& atoms() const { return measure_.atoms(); }

  /// V0 + density as one piecewise-constant function.
  PiecewiseConstant local_part() const { return bounded_ + density(); }

  friend bool operator==(const Potential&, const Potential&) = default;

 private:
  BoundedPart bounded_;
  Measure measure_;
};

Potential operator+(const Potential& a, const Potential& b);
Potential operator+(const Potential& p, const Measure& mu);
Potential operator-(const Potential& a, const Potential& b);

struct EssentialBounds {
  double v0 = 0.0;  // ess inf
  double v1 = 0.0;  // ess sup
};

/// Exact ess inf / ess sup of the bounded part over (lo, hi). Atoms and the
/// density are ignored. Throws InvalidInput unless lo < hi.
EssentialBounds essential_bounds(const Potential& p, double lo, double hi);

/// Bounds over the whole real line.
EssentialBounds essential_bounds(const Potential& p);

/// Jordan split of the measure part: tv = plus + minus.
struct TotalVariation {
  double tv = 0.0;
  double plus = 0.0;
  double minus = 0.0;
};

TotalVariation total_variation(const Measure& mu);
TotalVariation total_variation(const Potential& p);

struct ThresholdSplit {
  BoundedPart bounded;
  DensityPart l1;
};

/// Split f = f (1 - chi_A) + f chi_A with A = {|f| > 1}. Throws
/// NonIntegrableExcess when a tail exceeds 1 in modulus.
ThresholdSplit decompose_threshold(const PiecewiseConstant& f);

/// Translate every breakpoint and atom by h.
Potential shift(const Potential& p, double h);

/// Sufficient test for (V1 - V2)(u, u) >= 0 on H^1: the local part of
/// p1 - p2 is >= 0 everywhere and every atom of p1 - p2 has weight >= 0.
bool pointwise_geq(const Potential& p1, const Potential& p2);

/// Smallest interval containing every breakpoint and atom location;
/// nullopt for a constant potential with no atoms.
std::optional<std::pair<double, double>> support_hull(const Potential& p);

/// min(left tail, right tail) of the local part; this rate governs decay.
double min_tail(const Potential& p);

/// max |V0 + density| over all pieces.
double max_abs_local(const Potential& p);

}  // namespace sobolev
