#include "sobolev/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sobolev/errors.hpp"

namespace sobolev {

namespace {

struct State {
  double u;
  double du;
};

// Solution of u'' = v u after a displacement d (either sign).
State propagate(State s, double v, double d) {
  if (v > 0.0) {
    const double k = std::sqrt(v);
    const double c = std::cosh(k * d), sh = std::sinh(k * d);
    return {s.u * c + s.du * sh / k, s.u * k * sh + s.du * c};
  }
  if (v < 0.0) {
    const double k = std::sqrt(-v);
    const double c = std::cos(k * d), sn = std::sin(k * d);
    return {s.u * c + s.du * sn / k, -s.u * k * sn + s.du * c};
  }
  return {s.u + s.du * d, s.du};
}

struct Range {
  double lo;
  double hi;
};

// Exact min/max of u over the segment from displacement 0 to d.
Range piece_range(State s, double v, double d) {
  const double end = propagate(s, v, d).u;
  Range r{std::min(s.u, end), std::max(s.u, end)};
  const double t_lo = std::min(0.0, d), t_hi = std::max(0.0, d);
  auto consider = [&](double t) {
    if (t > t_lo && t < t_hi) {
      const double val = propagate(s, v, t).u;
      r.lo = std::min(r.lo, val);
      r.hi = std::max(r.hi, val);
    }
  };
  if (v > 0.0) {
    // u' = k u sinh(kt) + u' cosh(kt) vanishes where tanh(kt) = -u'/(k u).
    const double k = std::sqrt(v);
    if (s.u != 0.0) {
      const double ratio = -s.du / (k * s.u);
      if (std::abs(ratio) < 1.0) consider(std::atanh(ratio) / k);
    }
  } else if (v < 0.0) {
    // u = A cos(kt) + B sin(kt); critical points at kt = atan2(B, A) + n pi.
    const double k = std::sqrt(-v);
    const double phase = std::atan2(s.du / k, s.u);
    const double n_lo = std::ceil((k * t_lo - phase) / std::numbers::pi);
    const double n_hi = std::floor((k * t_hi - phase) / std::numbers::pi);
    // Beyond two critical points both signs of the amplitude are reached.
    for (double m = n_lo; m <= std::min(n_hi, n_lo + 2.0); m += 1.0) {
      consider((phase + m * std::numbers::pi) / k);
    }
  }
  return r;
}

struct Knots {
  std::vector<double> x;
  std::vector<double> value;  // value[j] on (x[j], x[j+1])
  std::vector<double> atom;   // atom weight at x[j]
  std::size_t peak = 0;
};

Knots make_knots(const Potential& p, double a) {
  const auto local = p.local_part();
  Knots k;
  k.x = local.breakpoints();
  for (const auto& atom : p.atoms()) k.x.push_back(atom.location);
  k.x.push_back(a);
  std::sort(k.x.begin(), k.x.end());
  k.x.erase(std::unique(k.x.begin(), k.x.end()), k.x.end());
  k.peak = static_cast<std::size_t>(std::lower_bound(k.x.begin(), k.x.end(), a) - k.x.begin());
  for (std::size_t j = 0; j + 1 < k.x.size(); ++j) {
    k.value.push_back(local(0.5 * (k.x[j] + k.x[j + 1])));
  }
  k.atom.assign(k.x.size(), 0.0);
  for (const auto& atom : p.atoms()) {
    const auto j = static_cast<std::size_t>(
        std::lower_bound(k.x.begin(), k.x.end(), atom.location) - k.x.begin());
    k.atom[j] += atom.weight;
  }
  return k;
}

void require_finite(State s) {
  if (!std::isfinite(s.u) || !std::isfinite(s.du)) {
    throw MethodInapplicable("transfer: propagated solution overflowed");
  }
}

}  // namespace

ExactProfile transfer_profile(const Potential& p, double a) {
  if (!std::isfinite(a)) throw InvalidInput("transfer: peak must be finite");
  const auto local = p.local_part();
  const double v_left = local.left_tail(), v_right = local.right_tail();
  if (!(v_left > 0.0) || !(v_right > 0.0)) {
    throw InvalidPotential("transfer: a tail value <= 0 admits no decaying solution");
  }
  const Knots k = make_knots(p, a);
  const std::size_t last = k.x.size() - 1;
  const std::size_t ja = k.peak;
  constexpr double kRel = 1e-12;

  ExactProfile prof;
  prof.peak_ = a;
  prof.knots_ = k.x;
  prof.piece_value_ = k.value;
  prof.left_tail_ = v_left;
  prof.right_tail_ = v_right;
  prof.peak_knot_ = ja;

  // Left half-line: e^{sqrt(v_left) (x - x_0)} up to x_0, then piecewise.
  State s{1.0, std::sqrt(v_left)};
  double lo = 1.0, hi = 1.0;
  std::vector<ExactProfile::State> left;
  for (std::size_t j = 0; j < ja; ++j) {
    s.du += k.atom[j] * s.u;
    left.push_back({s.u, s.du});
    const double d = k.x[j + 1] - k.x[j];
    const Range r = piece_range(s, k.value[j], d);
    lo = std::min(lo, r.lo);
    hi = std::max(hi, r.hi);
    s = propagate(s, k.value[j], d);
    require_finite(s);
  }
  const State at_left = s;
  if (!(lo > 0.0) || hi > at_left.u * (1.0 + kRel)) {
    throw MethodInapplicable("transfer: left solution leaves (0, 1] before the peak");
  }

  // Right half-line, propagated leftwards.
  s = {1.0, -std::sqrt(v_right)};
  lo = hi = 1.0;
  std::vector<ExactProfile::State> right(k.x.size());
  for (std::size_t j = last; j > ja; --j) {
    s.du -= k.atom[j] * s.u;
    right[j] = {s.u, s.du};
    const double d = k.x[j - 1] - k.x[j];
    const Range r = piece_range(s, k.value[j - 1], d);
    lo = std::min(lo, r.lo);
    hi = std::max(hi, r.hi);
    s = propagate(s, k.value[j - 1], d);
    require_finite(s);
  }
  const State at_right = s;
  if (!(lo > 0.0) || hi > at_right.u * (1.0 + kRel)) {
    throw MethodInapplicable("transfer: right solution leaves (0, 1] before the peak");
  }

  for (auto& st : left) {
    st.u /= at_left.u;
    st.du /= at_left.u;
  }
  for (std::size_t j = ja + 1; j <= last; ++j) {
    right[j].u /= at_right.u;
    right[j].du /= at_right.u;
  }
  left.resize(k.x.size());
  prof.left_ = std::move(left);
  prof.right_ = std::move(right);
  prof.value_ = at_left.du / at_left.u - at_right.du / at_right.u + k.atom[ja];
  return prof;
}

ExactProfile::State ExactProfile::state_at(double x) const {
  const std::size_t last = knots_.size() - 1;
  if (x <= peak_) {
    if (x < knots_.front() || peak_knot_ == 0) {
      const double u0 = peak_knot_ == 0 ? 1.0 : left_[0].u;
      const double k = std::sqrt(left_tail_);
      const double u = u0 * std::exp(k * (x - knots_.front()));
      return {u, k * u};
    }
    auto j = static_cast<std::size_t>(
        std::upper_bound(knots_.begin(), knots_.end(), x) - knots_.begin()) - 1;
    j = std::min(j, peak_knot_ - 1);
    const auto& st = left_[j];
    const auto s = propagate({st.u, st.du}, piece_value_[j], x - knots_[j]);
    return {s.u, s.du};
  }
  if (x > knots_.back()) {
    const double u0 = peak_knot_ == last ? 1.0 : right_[last].u;
    const double k = std::sqrt(right_tail_);
    const double u = u0 * std::exp(-k * (x - knots_.back()));
    return {u, -k * u};
  }
  const auto j = static_cast<std::size_t>(
      std::lower_bound(knots_.begin(), knots_.end(), x) - knots_.begin());
  const auto& st = right_[j];
  const auto s = propagate({st.u, st.du}, piece_value_[j - 1], x - knots_[j]);
  return {s.u, s.du};
}

double ExactProfile::operator()(double x) const {
  if (x == peak_) return 1.0;
  return state_at(x).u;
}

double ExactProfile::derivative(double x) const { return state_at(x).du; }

InnerSolution solve_transfer(const Potential& p, double a) {
  const auto prof = transfer_profile(p, a);
  InnerSolution sol;
  sol.method = Method::transfer;
  sol.certificate = Certificate::exact;
  sol.value = prof.value();
  sol.peak = a;
  const auto local = p.local_part();
  std::vector<double> xs = local.breakpoints();
  for (const auto& atom : p.atoms()) xs.push_back(atom.location);
  xs.push_back(a);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  sol.x = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Index>(xs.size()));
  sol.u = sol.x.unaryExpr([&](double x) { return prof(x); });
  return sol;
}

InnerSolution solve_transfer(const Potential& p, double a, const Grid& g) {
  const auto prof = transfer_profile(p, a);
  InnerSolution sol;
  sol.method = Method::transfer;
  sol.certificate = Certificate::exact;
  sol.value = prof.value();
  sol.peak = a;
  sol.x = g.nodes;
  sol.u = g.nodes.unaryExpr([&](double x) { return prof(x); });
  return sol;
}

}  // namespace sobolev
