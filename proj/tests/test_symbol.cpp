#include <doctest.h>

#include <string>
#include <vector>

#include "support.hpp"
#include "wcospec/error.hpp"
#include "wcospec/expr.hpp"
#include "wcospec/symbol.hpp"

using namespace wcospec;

namespace {

const std::vector<std::string> kCatalog = {
    "1",
    "2+z",
    "exp(0.3*z)/(1 - 0.2*z)",
    "3 - z^2",
    "(1+0.5*z)^-2",
    "exp(z)",
    "pow(1 - z, 0.5) + 2",
    "log(3 + z)",
    "2i + 0.5*z*exp(-z)",
    "(4 - z)/(2 + z^3)",
    "pow(-1 - z, 1.5)*0.25 + 3",
    "-(z - 3)*(z + 2.5e0)",
};

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("symbol") {

TEST_CASE("parse") {
  CHECK(parse_expr("1").constant_value() == std::optional<cd>(1.0));
  const WeightExpr u = parse_expr("2+z");
  CHECK(u == WeightExpr::constant(2) + WeightExpr::variable());
  CHECK(u.evaluate(0.5) == cd(2.5));
  CHECK(std::abs(parse_expr("exp(0.3*z)/(1 - 0.2*z)").evaluate(0.0) - 1.0) < 1e-15);
}

TEST_CASE("parse precedence") {
  CHECK(parse_expr("-z^2").evaluate(2.0) == cd(-4));
  CHECK(parse_expr("1+2*3").evaluate(0.0) == cd(7));
  CHECK(parse_expr("8/2/2").evaluate(0.0) == cd(2));
  CHECK(parse_expr("2*-z").evaluate(1.0) == cd(-2));
  CHECK(parse_expr("z^-1").evaluate(4.0) == cd(0.25));
  CHECK(std::abs(parse_expr("pi").evaluate(0.0) - M_PI) < 1e-15);
  CHECK(parse_expr("3i").evaluate(0.0) == cd(0, 3));
  CHECK(parse_expr("i*z").evaluate(2.0) == cd(0, 2));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_expr("2+*z");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(e.position() == 2);
  }
  CHECK(kind_of([] { parse_expr("(1+z"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_expr("foo(z)"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_expr("z^2^3"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_expr("exp(z, 2)"); }) == ErrorKind::ArityError);
  CHECK(kind_of([] { parse_expr("pow(1 - z)"); }) == ErrorKind::ArityError);
  CHECK(kind_of([] { parse_expr("log()"); }) == ErrorKind::ArityError);
}

TEST_CASE("analyze") {
  const Automorphism psi = Automorphism::canonical(0.5);
  const WeightSymbol one = analyze(parse_expr("1"), psi, 64);
  CHECK(one.A_plus() == doctest::Approx(1));
  CHECK(one.A_minus() == doctest::Approx(1));
  CHECK(one.B_plus() == doctest::Approx(1));
  CHECK(one.B_minus() == doctest::Approx(1));
  CHECK(one.sup_norm_est == doctest::Approx(1));
  CHECK(one.inf_modulus_est == doctest::Approx(1));

  const WeightSymbol u = analyze(parse_expr("2+z"), psi, 256);
  CHECK(u.A_plus() == doctest::Approx(3).epsilon(1e-5));
  CHECK(u.A_minus() == doctest::Approx(3).epsilon(1e-5));
  CHECK(u.B_plus() == doctest::Approx(1).epsilon(1e-5));
  CHECK(u.B_minus() == doctest::Approx(1).epsilon(1e-5));
  CHECK(u.sup_norm_est == doctest::Approx(3).epsilon(1e-5));
  CHECK(u.inf_modulus_est == doctest::Approx(1).epsilon(1e-5));

  CHECK(kind_of([&] { analyze(parse_expr("z"), psi, 64); }) == ErrorKind::NotInvertible);
  CHECK(kind_of([&] { analyze(parse_expr("0.5+z"), psi, 64); }) == ErrorKind::NotInvertible);
}

TEST_CASE("analyze flags boundary atoms as heuristic") {
  const Automorphism psi = Automorphism::canonical(0.5);
  CHECK_FALSE(analyze(parse_expr("2+z"), psi, 32).heuristic);
  const WeightSymbol s = analyze(parse_expr("2 + pow(1 - z, 0.5)"), psi, 32);
  CHECK(s.heuristic);
}

TEST_CASE("winding_check") {
  CHECK(winding_check(parse_expr("2+z"), 0.99) == 0);
  CHECK(winding_check(parse_expr("z"), 0.5) == 1);
  CHECK(winding_check(parse_expr("exp(z)"), 0.99) == 0);
  CHECK(winding_check(parse_expr("(z - 0.3)*(z + 0.2i)"), 0.9) == 2);
  CHECK(kind_of([] { winding_check(parse_expr("z - 0.5"), 0.5); }) == ErrorKind::ZeroOnCircle);
}

TEST_CASE("parse_automorphism") {
  const Automorphism c = parse_automorphism("canonical:0.5");
  CHECK(c.coeffs().projectively_equal(Automorphism::canonical(0.5).coeffs(), 1e-14));
  const Automorphism f = parse_automorphism("fixed:i,-i;deriv:0.5");
  CHECK(std::abs(f.a() - cd(0, 1)) < 1e-15);
  CHECK(f.canonical_r() == doctest::Approx(1.0 / 3.0));
  CHECK(kind_of([] { parse_automorphism("canonical:1.5"); }) == ErrorKind::InvalidMultiplier);
  CHECK(kind_of([] { parse_automorphism("fixed:1,1;deriv:0.5"); }) == ErrorKind::InvalidFixedPoints);
}

TEST_CASE("property: printing round-trips") {
  for (const auto& text : kCatalog) {
    CAPTURE(text);
    const WeightExpr e = parse_expr(text);
    const WeightExpr again = parse_expr(e.to_string());
    CHECK(again == e);
    CHECK(again.to_string() == e.to_string());
  }
}

TEST_CASE("property: series agrees with the evaluator") {
  std::mt19937_64 rng(40);
  for (const auto& text : kCatalog) {
    CAPTURE(text);
    const WeightExpr e = parse_expr(text);
    const TaylorSeries s = e.to_series(256);
    for (int k = 0; k < 20; ++k) {
      const cd z = testing::random_point(rng, 0.9);
      CHECK(std::abs(s.evaluate(z) - e.evaluate(z)) < 1e-9);
    }
  }
}

TEST_CASE("property: continuous symbols have equal boundary limits") {
  const Automorphism psi = Automorphism::from_fixed_points(std::polar(1.0, 0.4), std::polar(1.0, 2.9), 0.4);
  for (const auto& text : kCatalog) {
    const WeightExpr e = parse_expr(text);
    if (e.has_boundary_atom_at(psi.a()) || e.has_boundary_atom_at(psi.b())) continue;
    CAPTURE(text);
    const WeightSymbol s = analyze(e, psi, 64);
    // the nearest rungs sit 2^-16 from the point, so the spread is |grad u| * 1.5e-5
    CHECK(std::abs(s.A_plus() - s.A_minus()) < 1e-4 * s.A_plus());
    CHECK(std::abs(s.B_plus() - s.B_minus()) < 1e-4 * s.B_plus());
    CHECK(s.A_minus() <= s.A_plus());
    CHECK(std::min(s.A_minus(), s.B_minus()) >= s.inf_modulus_est - 1e-9);
    CHECK(std::max(s.A_plus(), s.B_plus()) <= s.sup_norm_est + 1e-9);
  }
}

TEST_CASE("property: analyze is deterministic") {
  const Automorphism psi = Automorphism::canonical(0.5);
  for (const auto& text : kCatalog) {
    CAPTURE(text);
    const WeightSymbol s1 = analyze(parse_expr(text), psi, 128);
    const WeightSymbol s2 = analyze(parse_expr(text), psi, 128);
    CHECK(s1.sup_norm_est == s2.sup_norm_est);
    CHECK(s1.inf_modulus_est == s2.inf_modulus_est);
    CHECK(s1.A_plus() == s2.A_plus());
    CHECK(s1.B_minus() == s2.B_minus());
    CHECK(s1.series.coeffs() == s2.series.coeffs());
  }
}

}
