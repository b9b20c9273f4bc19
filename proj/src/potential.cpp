#include "sobolev/potential.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "sobolev/errors.hpp"

namespace sobolev {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Sorted union of two strictly increasing lists.
std::vector<double> merge_breakpoints(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Value of f on the piece (lo, hi), where no breakpoint of f lies inside.
double sample_piece(const PiecewiseConstant& f, double lo, double hi) {
  return f(0.5 * (lo + hi));
}

template <class Op>
PiecewiseConstant combine(const PiecewiseConstant& a, const PiecewiseConstant& b, Op op) {
  auto bp = merge_breakpoints(a.breakpoints(), b.breakpoints());
  std::vector<double> values;
  if (bp.size() > 1) values.reserve(bp.size() - 1);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    values.push_back(op(sample_piece(a, bp[i], bp[i + 1]), sample_piece(b, bp[i], bp[i + 1])));
  }
  return PiecewiseConstant(std::move(bp), std::move(values),
                           op(a.left_tail(), b.left_tail()),
                           op(a.right_tail(), b.right_tail()));
}

std::vector<Atom> normalize_atoms(std::vector<Atom> atoms) {
  for (const auto& atom : atoms) {
    if (!std::isfinite(atom.location) || !std::isfinite(atom.weight)) {
      throw InvalidInput("atom with non-finite location or weight");
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.location < r.location; });
  std::vector<Atom> merged;
  for (const auto& atom : atoms) {
    if (!merged.empty() && merged.back().location == atom.location) {
      merged.back().weight += atom.weight;
    } else {
      merged.push_back(atom);
    }
  }
  return merged;
}

}  // namespace

// ---------------------------------------------------------------------------
// PiecewiseConstant

PiecewiseConstant::PiecewiseConstant(std::vector<double> breakpoints,
                                     std::vector<double> values, double left_tail,
                                     double right_tail)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      left_tail_(left_tail),
      right_tail_(right_tail) {
  if (!all_finite(breakpoints_) || !all_finite(values_) || !std::isfinite(left_tail_) ||
      !std::isfinite(right_tail_)) {
    throw InvalidInput("piecewise-constant function with non-finite data");
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i - 1] < breakpoints_[i])) {
      throw InvalidInput("breakpoints must be strictly increasing");
    }
  }
  if (breakpoints_.empty()) {
    if (!values_.empty()) throw InvalidInput("values given without breakpoints");
    if (left_tail_ != right_tail_) {
      throw InvalidInput("a function without breakpoints needs left_tail == right_tail");
    }
  } else if (values_.size() + 1 != breakpoints_.size()) {
    throw InvalidInput("values must have one entry per interval between breakpoints");
  }
}

PiecewiseConstant PiecewiseConstant::constant(double value) {
  return PiecewiseConstant({}, {}, value, value);
}

double PiecewiseConstant::operator()(double x) const {
  if (breakpoints_.empty() || x < breakpoints_.front()) return left_tail_;
  if (x >= breakpoints_.back()) return right_tail_;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return values_[static_cast<std::size_t>(std::distance(breakpoints_.begin(), it)) - 1];
}

double PiecewiseConstant::value_on(double lo, double hi) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), lo);
  if (it != breakpoints_.end() && *it < hi) {
    throw AssemblyContractViolation("interval straddles a breakpoint");
  }
  return (*this)(lo);
}

bool PiecewiseConstant::is_constant() const {
  if (left_tail_ != right_tail_) return false;
  return std::all_of(values_.begin(), values_.end(),
                     [&](double v) { return v == left_tail_; });
}

bool PiecewiseConstant::is_nondecreasing() const {
  double prev = left_tail_;
  for (double v : values_) {
    if (v < prev) return false;
    prev = v;
  }
  return right_tail_ >= prev;
}

bool PiecewiseConstant::is_nonincreasing() const {
  double prev = left_tail_;
  for (double v : values_) {
    if (v > prev) return false;
    prev = v;
  }
  return right_tail_ <= prev;
}

bool PiecewiseConstant::is_zero() const { return is_constant() && left_tail_ == 0.0; }

PiecewiseConstant PiecewiseConstant::simplified() const {
  if (breakpoints_.empty()) return *this;
  std::vector<double> bp;
  std::vector<double> vals;
  double prev = left_tail_;
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    double next = i < values_.size() ? values_[i] : right_tail_;
    if (next != prev) {
      if (!bp.empty()) vals.push_back(prev);
      bp.push_back(breakpoints_[i]);
    }
    prev = next;
  }
  if (bp.empty()) return constant(left_tail_);
  return PiecewiseConstant(std::move(bp), std::move(vals), left_tail_, right_tail_);
}

PiecewiseConstant PiecewiseConstant::shifted(double h) const {
  auto bp = breakpoints_;
  for (double& x : bp) x += h;
  return PiecewiseConstant(std::move(bp), values_, left_tail_, right_tail_);
}

PiecewiseConstant operator+(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}

PiecewiseConstant operator-(const PiecewiseConstant& a) {
  auto vals = a.values();
  for (double& v : vals) v = -v;
  return PiecewiseConstant(a.breakpoints(), std::move(vals), -a.left_tail(), -a.right_tail());
}

PiecewiseConstant operator-(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}

// ---------------------------------------------------------------------------
// DensityPart

DensityPart::DensityPart(PiecewiseConstant f) : PiecewiseConstant(std::move(f)) {
  if (left_tail() != 0.0 || right_tail() != 0.0) {
    throw InvalidInput("density must vanish outside a bounded interval");
  }
}

double DensityPart::positive_mass() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < values().size(); ++i) {
    sum += std::max(values()[i], 0.0) * (breakpoints()[i + 1] - breakpoints()[i]);
  }
  return sum;
}

double DensityPart::negative_mass() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < values().size(); ++i) {
    sum += std::max(-values()[i], 0.0) * (breakpoints()[i + 1] - breakpoints()[i]);
  }
  return sum;
}

double DensityPart::total_variation() const { return positive_mass() + negative_mass(); }

// ---------------------------------------------------------------------------
// Measure

Measure::Measure(DensityPart density, std::vector<Atom> atoms)
    : density_(std::move(density)), atoms_(normalize_atoms(std::move(atoms))) {}

bool Measure::is_zero() const {
  return density_.is_zero() &&
         std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.weight == 0.0; });
}

bool Measure::is_nonnegative() const {
  return std::all_of(density_.values().begin(), density_.values().end(),
                     [](double v) { return v >= 0.0; }) &&
         std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.weight >= 0.0; });
}

Measure Measure::shifted(double h) const {
  auto atoms = atoms_;
  for (auto& atom : atoms) atom.location += h;
  return Measure(DensityPart(density_.shifted(h)), std::move(atoms));
}

Measure operator+(const Measure& a, const Measure& b) {
  auto atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return Measure(DensityPart(a.density() + b.density()), std::move(atoms));
}

Measure operator-(const Measure& a) {
  auto atoms = a.atoms();
  for (auto& atom : atoms) atom.weight = -atom.weight;
  return Measure(DensityPart(-a.density()), std::move(atoms));
}

// ---------------------------------------------------------------------------
// Potential

Potential operator+(const Potential& a, const Potential& b) {
  return Potential(BoundedPart(a.bounded() + b.bounded()), a.measure() + b.measure());
}

Potential operator+(const Potential& p, const Measure& mu) {
  return Potential(p.bounded(), p.measure() + mu);
}

Potential operator-(const Potential& a, const Potential& b) {
  return Potential(BoundedPart(a.bounded() - b.bounded()), a.measure() + (-b.measure()));
}

EssentialBounds essential_bounds(const Potential& p, double lo, double hi) {
  if (!(lo < hi)) throw InvalidInput("essential_bounds: empty interval");
  const auto& f = p.bounded();
  const auto& bp = f.breakpoints();
  // Points splitting (lo, hi) into pieces of f; sample each piece at its midpoint.
  std::vector<double> cuts{lo};
  for (double x : bp) {
    if (x > lo && x < hi) cuts.push_back(x);
  }
  cuts.push_back(hi);
  EssentialBounds out{std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo_i = cuts[i], hi_i = cuts[i + 1];
    double v;
    if (std::isinf(lo_i)) {
      v = bp.empty() ? f.left_tail() : f(std::min(bp.front(), hi_i) - 1.0);
    } else if (std::isinf(hi_i)) {
      v = bp.empty() ? f.right_tail() : f(std::max(bp.back(), lo_i) + 1.0);
    } else {
      v = f(0.5 * (lo_i + hi_i));
    }
    out.v0 = std::min(out.v0, v);
    out.v1 = std::max(out.v1, v);
  }
  return out;
}

EssentialBounds essential_bounds(const Potential& p) {
  return essential_bounds(p, -std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::infinity());
}

TotalVariation total_variation(const Measure& mu) {
  TotalVariation out;
  out.plus = mu.density().positive_mass();
  out.minus = mu.density().negative_mass();
  for (const auto& atom : mu.atoms()) {
    if (atom.weight > 0.0) out.plus += atom.weight;
    else out.minus -= atom.weight;
  }
  out.tv = out.plus + out.minus;
  return out;
}

TotalVariation total_variation(const Potential& p) { return total_variation(p.measure()); }

ThresholdSplit decompose_threshold(const PiecewiseConstant& f) {
  if (std::abs(f.left_tail()) > 1.0 || std::abs(f.right_tail()) > 1.0) {
    throw NonIntegrableExcess("tail exceeds the threshold 1; the L1 part would have infinite mass");
  }
  std::vector<double> bounded_vals, l1_vals;
  bounded_vals.reserve(f.values().size());
  l1_vals.reserve(f.values().size());
  for (double v : f.values()) {
    bool excess = std::abs(v) > 1.0;
    bounded_vals.push_back(excess ? 0.0 : v);
    l1_vals.push_back(excess ? v : 0.0);
  }
  return {BoundedPart(f.breakpoints(), std::move(bounded_vals), f.left_tail(), f.right_tail()),
          DensityPart(f.breakpoints(), std::move(l1_vals))};
}

Potential shift(const Potential& p, double h) {
  return Potential(BoundedPart(p.bounded().shifted(h)), p.measure().shifted(h));
}

bool pointwise_geq(const Potential& p1, const Potential& p2) {
  const Potential diff = p1 - p2;
  const auto local = diff.local_part();
  if (local.left_tail() < 0.0 || local.right_tail() < 0.0) return false;
  for (double v : local.values()) {
    if (v < 0.0) return false;
  }
  return std::all_of(diff.atoms().begin(), diff.atoms().end(),
                     [](const Atom& a) { return a.weight >= 0.0; });
}

std::optional<std::pair<double, double>> support_hull(const Potential& p) {
  std::vector<double> pts;
  for (const auto* f : {static_cast<const PiecewiseConstant*>(&p.bounded()),
                        static_cast<const PiecewiseConstant*>(&p.density())}) {
    if (!f->breakpoints().empty()) {
      pts.push_back(f->breakpoints().front());
      pts.push_back(f->breakpoints().back());
    }
  }
  for (const auto& atom : p.atoms()) pts.push_back(atom.location);
  if (pts.empty()) return std::nullopt;
  auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
  return std::make_pair(*lo, *hi);
}

double min_tail(const Potential& p) {
  return std::min(p.bounded().left_tail(), p.bounded().right_tail());
}

double max_abs_local(const Potential& p) {
  const auto local = p.local_part();
  double m = std::max(std::abs(local.left_tail()), std::abs(local.right_tail()));
  for (double v : local.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace sobolev
