#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"

using namespace lpdo;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex at(const Symbol& s, Point k, TorusPoint x) { return s(k, x); }

}  // namespace

TEST_CASE("parser evaluates the documented examples") {
  CHECK(at(parse_symbol("1", 1), {5}, {0.3}) == Complex(1.0));
  const Complex e = at(parse_symbol("exp(i*twopi*x1)", 1), {2}, {0.125});
  CHECK(std::abs(e - std::polar(1.0, kTwoPi * 0.125)) < 1e-15);
  const Symbol jump = parse_symbol("step(k1)*exp(i*twopi*x1)+(1-step(k1))", 1);
  CHECK(std::abs(at(jump, {-3}, {0.25}) - 1.0) < 1e-15);
  CHECK(std::abs(at(jump, {0}, {0.25}) - Complex(0.0, 1.0)) < 1e-15);
  CHECK(at(parse_symbol("2.5e-1 + -k1^2", 1), {3}, {0.0}) == Complex(-8.75));
  CHECK(at(parse_symbol("abs(k1-k2)/sqrt(4)", 2), {1, 4}, {0.0, 0.0}) == Complex(1.5));
  CHECK(std::abs(at(parse_symbol("sin(twopi*x2)^2 + cos(twopi*x2)^2", 2), {0, 0}, {0.1, 0.37}) - 1.0) < 1e-15);
}

TEST_CASE("parser rejects malformed text with a position") {
  CHECK_THROWS_AS(parse_symbol("", 1), ParseError);
  CHECK_THROWS_AS(parse_symbol("1 +", 1), ParseError);
  CHECK_THROWS_AS(parse_symbol("k2", 1), ParseError);
  CHECK_THROWS_AS(parse_symbol("x0", 1), ParseError);
  CHECK_THROWS_AS(parse_symbol("k1^k1", 1), ParseError);
  CHECK_THROWS_AS(parse_symbol("log(k1)", 1), ParseError);
  CHECK_THROWS_AS(parse_symbol("(1+k1", 1), ParseError);
  try {
    parse_symbol("1 + * 2", 1);
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("pretty printing reparses to the same tree") {
  for (const char* text : {"1", "-k1^-2 + 3", "exp(i*twopi*(x1-x2))*(1+k1^2+k2^2)^(1/2)",
                           "step(k2)/(2-cos(twopi*x1))", "((k1))", "1e-3*abs(k1)^0.5"}) {
    const Expression e = Expression::parse(text, 2);
    CHECK(Expression::parse(e.to_string(), 2) == e);
  }
}

TEST_CASE("step at zero is one") {
  CHECK(at(parse_symbol("step(k1)", 1), {0}, {0.0}) == Complex(1.0));
  CHECK(at(parse_symbol("step(k1)", 1), {-1}, {0.0}) == Complex(0.0));
}

TEST_CASE("bessel builtin values") {
  CHECK(std::abs(at(bessel_symbol(2, 2.0), {1, 2}, {0.4, 0.9}) - 6.0) < 1e-14);
  CHECK(at(bessel_symbol(1, 0.0), {7}, {0.0}) == Complex(1.0));
  CHECK(at(bessel_symbol(1, 2.0), {0}, {0.0}).real() == doctest::Approx(1.0));
  CHECK(at(bessel_symbol(2, -1.0), {2, 2}, {0.0, 0.0}).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(bessel_symbol(1, 3.0).declared_order() == 3.0);
  CHECK_FALSE(bessel_symbol(1, 3.0).depends_on_x());
}

TEST_CASE("bessel expression matches the builtin") {
  const Symbol parsed = parse_symbol("(1+k1^2+k2^2)^(1/2)", 2);
  const Symbol builtin = bessel_symbol(2, 1.0);
  const LatticeWindow w(2, 10);
  const TorusGrid g(2, 7);
  const Matrix a = parsed.sample(w, g);
  const Matrix b = builtin.sample(w, g);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-14);
  for (Index i = 0; i < w.size(); ++i) {
    const Point k = w.point(i);
    CHECK(std::abs(a(i, 0).real() - std::sqrt(1.0 + k[0] * k[0] + k[1] * k[1])) < 1e-14);
  }
}

TEST_CASE("evaluation is periodic in x, exactly on grid nodes") {
  const LatticeWindow w(1, 6);
  const TorusGrid g(1, 15);
  const Symbol grid = compose(parse_symbol("2+exp(i*twopi*x1)/(1+k1^2)", 1), jump_symbol(1, 1), w, g);
  for (const Symbol& s : {parse_symbol("exp(i*twopi*x1)*k1", 1), multiplier_symbol(1, 1.0, 1.0, 0.5, 1.0, 3.0),
                          jump_symbol(1, -1), grid}) {
    for (Index i = 0; i < w.size(); ++i) {
      const Point k = w.point(i);
      for (Index j = 0; j < g.size(); ++j) {
        const TorusPoint x = g.node(j);
        CHECK(s(k, x) == s(k, TorusPoint{x[0] + 1.0}));
        CHECK(s(k, x) == s(k, TorusPoint{x[0] - 1.0}));
      }
      CHECK(std::abs(s(k, TorusPoint{0.3}) - s(k, TorusPoint{2.3})) < 1e-12);
    }
  }
}

TEST_CASE("grid symbols refuse points outside their window") {
  const LatticeWindow w(1, 4);
  const Symbol s = extract_symbol(assemble_matrix(bessel_symbol(1, 1.0), w, default_grid(w)));
  CHECK_THROWS_AS(s(Point{5}, TorusPoint{0.0}), DomainError);
  CHECK(s(Point{4}, TorusPoint{0.0}).real() == doctest::Approx(std::sqrt(17.0)));
}

TEST_CASE("grid symbols interpolate trigonometrically between nodes") {
  const LatticeWindow w(1, 8);
  const TorusGrid g = default_grid(w);
  const Symbol wave = parse_symbol("1 + exp(i*twopi*x1) - 0.5*exp(-2*i*twopi*x1)", 1);
  const Symbol s = extract_symbol(assemble_matrix(wave, w, g));
  for (int k = -5; k <= 5; ++k) {
    for (double x : {0.01, 0.333, 0.71}) {
      CHECK(std::abs(s(Point{k}, TorusPoint{x}) - wave(Point{k}, TorusPoint{x})) < 1e-12);
    }
  }
}

TEST_CASE("dyadic shells") {
  CHECK(dyadic_shell(Point{0}) == 0);
  CHECK(dyadic_shell(Point{1}) == 1);
  CHECK(dyadic_shell(Point{2}) == 1);
  CHECK(dyadic_shell(Point{3}) == 2);
  CHECK(dyadic_shell(Point{-7}) == 3);
  // 1 + sqrt(2) < 4
  CHECK(dyadic_shell(Point{1, 1}) == 1);
  // 1 + sqrt(8) = 3.83
  CHECK(dyadic_shell(Point{2, 2}) == 1);
  CHECK(dyadic_shell(Point{3, 0}) == 2);
}

TEST_CASE("order estimates for bessel symbols") {
  for (double s : {-4.0, -2.5, -1.0, 0.5, 1.0, 2.0, 4.0}) {
    const LatticeWindow w(1, 64);
    CHECK(std::abs(estimate_order(bessel_symbol(1, s), w, default_grid(w)).m_hat - s) <= 0.1);
  }
  for (double s : {-2.0, 1.0, 3.0}) {
    const LatticeWindow w(2, 16);
    CHECK(std::abs(estimate_order(bessel_symbol(2, s), w, default_grid(w)).m_hat - s) <= 0.1);
  }
}

TEST_CASE("order estimates for order-zero symbols") {
  const LatticeWindow w(1, 32);
  const TorusGrid g = default_grid(w);
  const OrderEstimate one = estimate_order(parse_symbol("1", 1), w, g);
  CHECK(one.m_hat == 0.0);
  for (const ShellFit& f : one.table) {
    if (order(f.alpha) + order(f.beta) > 0) CHECK(f.vanishing);
  }
  CHECK(std::abs(estimate_order(parse_symbol("exp(i*twopi*x1)", 1), w, g).m_hat) <= 0.1);
  CHECK(std::abs(estimate_order(jump_symbol(1, 1), w, g).m_hat) <= 0.1);
  CHECK(std::abs(estimate_order(parse_symbol("2+exp(i*twopi*x1)/(1+k1^2)", 1), w, g).m_hat) <= 0.1);
  for (const ShellFit& f : estimate_order(jump_symbol(1, 1), w, g).table) {
    CHECK(f.shells.size() >= 3);
  }
}

TEST_CASE("ellipticity of bessel symbols against the exact ratio") {
  for (double s : {-3.0, -1.0, 0.0, 1.0, 2.0, 3.0}) {
    const LatticeWindow w(1, 32);
    const EllipticityReport r = check_ellipticity(bessel_symbol(1, s), s, w, default_grid(w));
    double exact = 1e300;
    for (int k = -32; k <= 32; ++k) {
      exact = std::min(exact, std::pow(1.0 + k * k, s / 2) / std::pow(1.0 + std::abs(k), s));
    }
    CHECK(r.elliptic);
    CHECK(r.M_radius == 0.0);
    CHECK(r.C == doctest::Approx(exact).epsilon(1e-12));
    CHECK(r.C >= std::pow(2.0, -std::abs(s) / 2));
  }
}

TEST_CASE("ellipticity of simple symbols") {
  const LatticeWindow w(1, 32);
  const TorusGrid g = default_grid(w);
  const EllipticityReport two = check_ellipticity(parse_symbol("2", 1), 0.0, w, g);
  CHECK(two.elliptic);
  CHECK(two.C == doctest::Approx(2.0));
  CHECK(two.M_radius == 0.0);
  CHECK_FALSE(check_ellipticity(parse_symbol("sin(twopi*x1)", 1), 0.0, w, g).elliptic);
  CHECK_FALSE(check_ellipticity(parse_symbol("(1+k1^2)^(-1/2)", 1), 0.0, w, g).elliptic);
  CHECK(check_ellipticity(jump_symbol(1, 1), 0.0, w, g).elliptic);
  // 2 + cos has minimum 1, attained between nodes when M is odd.
  const EllipticityReport c = check_ellipticity(parse_symbol("2 + cos(twopi*x1)", 1), 0.0, w, g);
  CHECK(c.C == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ellipticity radius excludes a low-frequency dip") {
  const LatticeWindow w(1, 32);
  const EllipticityReport r =
      check_ellipticity(parse_symbol("1 - 0.99*exp(-k1^2)", 1), 0.0, w, default_grid(w));
  CHECK(r.elliptic);
  // k = 0 is excluded; the bound holds for |k| > 0.
  CHECK(r.M_radius == 0.0);
  CHECK(r.C == doctest::Approx(1.0 - 0.99 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(r.min_ratio_profile.front() == doctest::Approx(0.01));
}

TEST_CASE("toroidal dual") {
  const ToroidalSymbol one = dual_toroidal_symbol(parse_symbol("1", 1));
  CHECK(one(TorusPoint{0.2}, Point{3}) == Complex(1.0));
  const ToroidalSymbol wave = dual_toroidal_symbol(parse_symbol("exp(i*twopi*x1)", 1));
  CHECK(std::abs(wave(TorusPoint{0.2}, Point{3}) - std::polar(1.0, -kTwoPi * 0.2)) < 1e-15);
  const ToroidalSymbol j = dual_toroidal_symbol(jump_symbol(1, 1));
  CHECK(j(TorusPoint{0.2}, Point{3}) == Complex(1.0));
  CHECK(std::abs(j(TorusPoint{0.2}, Point{-3}) - std::polar(1.0, -kTwoPi * 0.2)) < 1e-15);
  CHECK(dual_toroidal_symbol(bessel_symbol(1, 2.0)).declared_order() == 2.0);
}

TEST_CASE("eventually decreasing profiles") {
  CHECK(eventually_decreasing({1.0, 3.0, 2.0, 1.0}));
  CHECK(eventually_decreasing({0.0, 0.0, 0.0}));
  CHECK_FALSE(eventually_decreasing({1.0, 2.0, 3.0}));
  CHECK_FALSE(eventually_decreasing({3.0, 1.0, 2.0}));
}

TEST_CASE("S0 diagnostic") {
  const LatticeWindow w(1, 64);
  const TorusGrid g = default_grid(w);
  const S0Diagnostic d = s0_diagnostic(parse_symbol("exp(i*twopi*x1)/(1+k1^2)", 1), w, g, 2);
  CHECK(d.decays);
  CHECK(d.by_order.size() == 3);
  for (const DecayProfile& p : d.by_order) CHECK(p.shell_sups.back() < p.shell_sups.front());
  CHECK_FALSE(s0_diagnostic(parse_symbol("2", 1), w, g, 2).decays);
}
