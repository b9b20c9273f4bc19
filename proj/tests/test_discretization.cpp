#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "oracles.hpp"
#include "sobolev/discretization.hpp"
#include "sobolev/errors.hpp"

using namespace sobolev;

namespace {

Eigen::VectorXd sample(const Grid& g, double (*f)(double)) {
  return g.nodes.unaryExpr(f);
}

double e_abs(double x) { return std::exp(-std::abs(x)); }

}  // namespace

TEST_SUITE("discretization") {
  TEST_CASE("uniform grid for a constant potential") {
    const auto g = build_grid(Potential::constant(1.0), 0.0, 20.0, 0.1);
    CHECK(g.left == -20.0);
    CHECK(g.right == 20.0);
    CHECK(g.size() == 401);
    CHECK(g.peak_index == 200);
    CHECK(g.peak() == 0.0);
    CHECK(g.max_width() <= 0.1 + 1e-12);
  }

  TEST_CASE("atoms, breakpoints and the peak become nodes") {
    const Potential atom(BoundedPart(PiecewiseConstant::constant(1.0)), Measure({{0.05, 1.0}}));
    const auto g = build_grid(atom, 0.0, 5.0, 0.1);
    CHECK(g.find_node(0.05) >= 0);
    CHECK(g.find_node(0.0) == g.peak_index);

    const Potential well(BoundedPart({-1.0, 1.0}, {-4.0}, 1.0, 1.0));
    const auto w = build_grid(well, 0.3, 5.0, 0.1);
    CHECK(w.find_node(-1.0) >= 0);
    CHECK(w.find_node(0.3) == w.peak_index);
    CHECK(w.find_node(1.0) >= 0);
    CHECK(w.left == -6.0);
    CHECK(w.right == 6.0);
  }

  TEST_CASE("grid respects the margin on both sides of the peak") {
    const Potential well(BoundedPart({-1.0, 1.0}, {-4.0}, 1.0, 1.0));
    const auto g = build_grid(well, 7.5, 3.0, 0.05);
    CHECK(g.right - 7.5 >= 3.0);
    CHECK(-1.0 - g.left >= 3.0);
    CHECK(g.max_width() <= 0.05 + 1e-12);
  }

  TEST_CASE("peak within rounding of an atom snaps onto it") {
    const Potential atom(BoundedPart(PiecewiseConstant::constant(1.0)), Measure({{0.3, -1.0}}));
    const auto g = build_grid(atom, 0.3 + 1e-15, 10.0, 0.1);
    CHECK(g.peak() == 0.3);
    CHECK(g.max_width() > 1e-6);
  }

  TEST_CASE("invalid grid parameters") {
    const auto p = Potential::constant(1.0);
    CHECK_THROWS_AS(build_grid(p, 0.0, 10.0, 0.0), InvalidInput);
    CHECK_THROWS_AS(build_grid(p, 0.0, 10.0, -1.0), InvalidInput);
    CHECK_THROWS_AS(build_grid(p, 0.0, 0.0, 0.1), InvalidInput);
    CHECK_THROWS_AS(build_grid(p, NAN, 1.0, 0.1), InvalidInput);
    CHECK_THROWS_AS(default_margin(Potential(BoundedPart({0.0}, {}, 0.0, 1.0))), InvalidPotential);
  }

  TEST_CASE("default resolution") {
    const auto p = Potential::constant(4.0);
    CHECK(default_margin(p) == doctest::Approx(12.5));
    const auto g = build_grid(p, 0.0);
    CHECK(g.max_width() <= 0.005 + 1e-12);
    CHECK(g.left == doctest::Approx(-12.5));
  }

  TEST_CASE("stiffness and mass entries") {
    const auto g = build_grid(Potential::constant(0.0), 0.0, 1.0, 1.0);
    REQUIRE(g.size() == 3);
    const auto f = assemble(Potential::constant(0.0), g);
    CHECK(f.stiffness.diag(1) == doctest::Approx(2.0));
    CHECK(f.stiffness.off(0) == doctest::Approx(-1.0));

    const double alpha = 3.0, h = 0.25;
    const auto gc = build_grid(Potential::constant(alpha), 0.0, 1.0, h);
    const auto fc = assemble(Potential::constant(alpha), gc);
    CHECK(fc.weighted_mass.diag(2) == doctest::Approx(2.0 * alpha * h / 3.0));
    CHECK(fc.weighted_mass.diag(0) == doctest::Approx(alpha * h / 3.0));
    CHECK(fc.weighted_mass.off(1) == doctest::Approx(alpha * h / 6.0));
  }

  TEST_CASE("interior stiffness rows sum to zero") {
    gen::Rng rng(21);
    const Potential p(gen::positive_bounded(rng), DensityPart{}, gen::atoms(rng, 2, 0.0, 1.0));
    const auto g = build_grid(p, 0.4, 3.0, 0.07);
    const auto f = assemble(p, g);
    for (Index i = 1; i + 1 < g.size(); ++i) {
      CHECK(std::abs(f.stiffness.diag(i) + f.stiffness.off(i - 1) + f.stiffness.off(i)) <
            1e-9 * f.stiffness.diag(i));
    }
  }

  TEST_CASE("an atom adds its weight to the energy of the unit hat") {
    const double beta = 0.7;
    const Potential p(BoundedPart(PiecewiseConstant::constant(0.0)), Measure({{0.0, beta}}));
    const auto g = build_grid(p, 0.0, 1.0, 0.25);
    const auto f = assemble(p, g);
    Eigen::VectorXd hat = Eigen::VectorXd::Zero(g.size());
    hat(g.peak_index) = 1.0;
    CHECK(energy(f, hat) == doctest::Approx(2.0 / 0.25 + beta));
  }

  TEST_CASE("energy basics") {
    const auto p = Potential::constant(1.0);
    const auto g = build_grid(p, 0.0, 20.0, 0.01);
    const auto f = assemble(p, g);
    CHECK(energy(f, Eigen::VectorXd::Zero(g.size())) == 0.0);
    CHECK(energy(f, sample(g, e_abs)) == doctest::Approx(2.0).epsilon(1e-4));
    CHECK_THROWS_AS(energy(f, Eigen::VectorXd::Zero(3)), InvalidInput);

    const auto p0 = Potential::constant(0.0);
    const auto g0 = build_grid(p0, 0.0, 1.0, 0.2);
    Eigen::VectorXd hat = Eigen::VectorXd::Zero(g0.size());
    hat(g0.peak_index) = 1.0;
    CHECK(energy(assemble(p0, g0), hat) == doctest::Approx(2.0 / 0.2));
  }

  TEST_CASE("off-node atoms violate the assembly contract") {
    const Potential p(BoundedPart(PiecewiseConstant::constant(1.0)), Measure({{0.05, 1.0}}));
    const auto g = build_grid(Potential::constant(1.0), 0.0, 1.0, 0.1);
    CHECK_THROWS_AS(assemble(p, g), AssemblyContractViolation);
    const Potential s(BoundedPart({0.05}, {}, 1.0, 2.0));
    CHECK_THROWS_AS(assemble(s, g), AssemblyContractViolation);
  }

  TEST_CASE("assembly matches a dense Gauss-quadrature assembly") {
    gen::Rng rng(22);
    for (int k = 0; k < 20; ++k) {
      const Potential p(gen::positive_bounded(rng, -2.0, 3.0), gen::density(rng, 1.0),
                        gen::atoms(rng, 2, -1.0, 1.0));
      const auto g = build_grid(p, gen::uniform(rng, -2.0, 2.0), 2.0, 0.3);
      const auto dense = oracle::dense_form(p, g);
      const auto tri = assemble(p, g).combined().toDense();
      CHECK((dense - tri).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("second order consistency for the exact profile") {
    for (double alpha : {0.5, 1.0, 4.0}) {
      const auto p = Potential::constant(alpha);
      auto err = [&](double h) {
        const auto g = build_grid(p, 0.0, 30.0 / std::sqrt(alpha), h);
        const Eigen::VectorXd u =
            g.nodes.unaryExpr([&](double x) { return oracle::exp_profile(alpha, 0.0, x); });
        return std::abs(energy(assemble(p, g), u) - 2.0 * std::sqrt(alpha));
      };
      const double e1 = err(0.04), e2 = err(0.02);
      CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
    }
  }

  TEST_CASE("assembly is translation invariant") {
    gen::Rng rng(23);
    for (int k = 0; k < 20; ++k) {
      const Potential p(gen::positive_bounded(rng), gen::density(rng, 0.5),
                        gen::atoms(rng, 2, 0.0, 1.0));
      const double h = gen::integer(rng, -8, 8) / 4.0;
      const auto g = build_grid(p, 0.5, 4.0, 0.05);
      const auto gs = build_grid(shift(p, h), 0.5 + h, 4.0, 0.05);
      REQUIRE(g.size() == gs.size());
      const auto f = assemble(p, g).combined().toDense();
      const auto fs = assemble(shift(p, h), gs).combined().toDense();
      CHECK((f - fs).cwiseAbs().maxCoeff() < 1e-8 * f.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("coercivity bound on random feasible vectors") {
    gen::Rng rng(24);
    for (int k = 0; k < 30; ++k) {
      const Potential p(gen::positive_bounded(rng, 0.2, 3.0), gen::density(rng, 1.5),
                        gen::atoms(rng, 2, -1.0, 1.0));
      const double alpha = essential_bounds(p).v0;
      const double c1 = 1.0 / std::min(1.0, alpha);
      const double c2 = total_variation(p).tv / std::min(1.0, alpha);
      const auto g = build_grid(p, 0.0, 3.0, 0.05);
      const auto f = assemble(p, g);
      for (int s = 0; s < 10; ++s) {
        Eigen::VectorXd u(g.size());
        // Smooth-ish random vectors: a few random bumps, clipped to the box.
        u.setZero();
        for (int b = 0; b < 3; ++b) {
          const double c = gen::uniform(rng, -4.0, 4.0), w = gen::uniform(rng, 0.1, 2.0);
          const double amp = gen::uniform(rng, -1.0, 1.0);
          u += g.nodes.unaryExpr([&](double x) { return amp * std::exp(-std::pow((x - c) / w, 2)); });
        }
        u = u.cwiseMax(-1.0).cwiseMin(1.0);
        u(0) = u(g.size() - 1) = 0.0;
        const auto parts = h1_parts(u, g);
        const double scale = u.cwiseAbs().maxCoeff();
        CHECK(parts.gradient_sq + parts.l2_sq <= c1 * energy(f, u) + c2 * scale * scale + 1e-9);
      }
    }
  }

  TEST_CASE("embedding inequality") {
    const auto p = Potential::constant(1.0);
    const auto g = build_grid(p, 0.0, 30.0, 0.005);
    const Eigen::VectorXd u = sample(g, e_abs);
    CHECK(embedding_check(u, g));
    const auto parts = h1_parts(u, g);
    CHECK(std::sqrt(0.5 * (parts.gradient_sq + parts.l2_sq)) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(embedding_check(Eigen::VectorXd::Zero(g.size()), g));

    gen::Rng rng(25);
    const auto gc = build_grid(p, 0.0, 5.0, 0.1);
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd r(gc.size());
      for (Index i = 0; i < r.size(); ++i) r(i) = gen::uniform(rng, -1.0, 1.0);
      r(0) = r(r.size() - 1) = 0.0;
      CHECK(embedding_check(r, gc));
    }
  }
}
