#include <doctest.h>

#include "support.hpp"
#include "wcospec/error.hpp"
#include "wcospec/wco.hpp"

using namespace wcospec;
using testing::max_coeff_diff;

namespace {

std::vector<Automorphism> ten_maps() {
  std::vector<Automorphism> v;
  for (double r : {0.1, 0.3, 0.5, 0.7}) v.push_back(Automorphism::canonical(r));
  v.push_back(Automorphism::from_fixed_points(cd(0, 1), cd(0, -1), 0.5));
  v.push_back(Automorphism::from_fixed_points(std::polar(1.0, 0.3), std::polar(1.0, 2.2), 0.45));
  v.push_back(Automorphism::from_fixed_points(std::polar(1.0, -2.0), std::polar(1.0, 1.0), 0.3));
  v.push_back(Automorphism::from_fixed_points(std::polar(1.0, 1.5), std::polar(1.0, 1.9), 0.8));
  v.push_back(Automorphism::from_fixed_points(-1.0, 1.0, 0.6));
  v.push_back(Automorphism::from_fixed_points(std::polar(1.0, 3.0), std::polar(1.0, -0.5), 0.2));
  return v;
}

}  // namespace

TEST_SUITE("wco") {

TEST_CASE("apply") {
  const Automorphism psi = Automorphism::canonical(0.5);
  const std::size_t N = 128;
  const WCOperator id_weight(parse_expr("1"), psi, SpaceSpec::hardy(), N);
  CHECK(max_coeff_diff(id_weight.apply(TaylorSeries::constant(cd(2, -1), N)), TaylorSeries::constant(cd(2, -1), N)) < 1e-15);
  CHECK(max_coeff_diff(id_weight.apply(TaylorSeries::identity(N)), psi.to_series(N)) < 1e-15);
  const WCOperator T(parse_expr("2+z"), psi, SpaceSpec::hardy(), N);
  CHECK(max_coeff_diff(T.apply(TaylorSeries::constant(1, N)), parse_expr("2+z").to_series(N)) < 1e-15);
}

TEST_CASE("apply agrees with the closed-form route on low indices") {
  const Automorphism psi = Automorphism::canonical(0.5);
  const std::size_t N = 256;
  const WCOperator T(parse_expr("exp(0.3*z)/(1 - 0.2*z)"), psi, SpaceSpec::hardy(), N);
  const WeightExpr f = parse_expr("1 + z^2 - 0.5*z^5");
  const TaylorSeries a = T.apply(f.to_series(N)), b = T.apply_exact(f);
  for (std::size_t k = 0; k <= N / 2; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);
}

TEST_CASE("iterated_weight") {
  const Automorphism psi = Automorphism::canonical(0.5);
  const WCOperator T(parse_expr("2+z"), psi, SpaceSpec::hardy(), 256);
  CHECK(max_coeff_diff(T.iterated_weight(0), TaylorSeries::constant(1, 256)) == 0.0);
  CHECK(max_coeff_diff(T.iterated_weight(1), T.weight_series()) < 1e-15);
  const cd z = 0.2;
  const cd expect = (2.0 + z) * (2.0 + psi(z)) * (2.0 + psi(psi(z)));
  CHECK(std::abs(T.iterated_weight(3).evaluate(z) - expect) < 1e-10);
  CHECK(std::abs(T.iterated_weight_expr(3).evaluate(z) - expect) < 1e-12);
}

TEST_CASE("iterate_consistency") {
  const Automorphism psi = Automorphism::canonical(0.5);
  const WCOperator T(parse_expr("2+z"), psi, SpaceSpec::hardy(), 512);
  TaylorSeries f(512);
  f[0] = 1;
  f[2] = 1;
  CHECK(T.iterate_consistency(0, f) == 0.0);
  CHECK(T.iterate_consistency(1, f) < 1e-14);
  CHECK(T.iterate_consistency(5, f) < 1e-7);
}

TEST_CASE("property: iterate consistency on random polynomials") {
  std::mt19937_64 rng(70);
  const std::size_t N = 256;
  const WCOperator T(parse_expr("exp(0.3*z)/(1 - 0.2*z)"), Automorphism::canonical(0.3), SpaceSpec::bergman(1), N);
  for (int trial = 0; trial < 5; ++trial) {
    const TaylorSeries f = testing::random_poly(rng, N / 8, N);
    for (long n : {2L, 5L, 8L}) CHECK(T.iterate_consistency(n, f) < 1e-7);
  }
}

TEST_CASE("gelfand_sup_weight") {
  const Automorphism psi = Automorphism::canonical(0.5);
  const auto one = WCOperator(parse_expr("1"), psi, SpaceSpec::hardy(), 32).gelfand_sup_weight(10);
  for (double v : one.sup) CHECK(v == doctest::Approx(1).epsilon(1e-14));
  const auto c = WCOperator(parse_expr("3-4i"), psi, SpaceSpec::hardy(), 32).gelfand_sup_weight(10);
  for (double v : c.sup) CHECK(v == doctest::Approx(5).epsilon(1e-12));
  for (double v : c.inf) CHECK(v == doctest::Approx(5).epsilon(1e-12));

  const WCOperator T(parse_expr("2+z"), psi, SpaceSpec::hardy(), 64);
  const auto seq = T.gelfand_sup_weight(64);
  REQUIRE(seq.sup.size() == 64);
  CHECK(seq.sup.back() >= 2.8);
  CHECK(seq.sup.back() <= 3.05);
  CHECK(seq.inf.back() >= 1.0 - 0.05);
  CHECK(seq.sup.back() <= std::max(T.symbol().A_plus(), T.symbol().B_plus()) + 0.05);
}

TEST_CASE("property: sup weight of u/(psi')^gamma respects the spectral bound") {
  const Automorphism psi = Automorphism::canonical(0.5);
  for (const SpaceSpec sp : {SpaceSpec::hardy(), SpaceSpec::bergman(0)}) {
    const double g = sp.gamma();
    const WeightExpr u = parse_expr("2+z");
    const WeightExpr v = u / isometry_weight(psi.coeffs(), g);
    const WCOperator T(v, psi, sp, 64);
    const double bound = std::max(3.0 / std::pow(psi.lambda_a(), g), 1.0 / std::pow(psi.lambda_b(), g));
    CAPTURE(sp.to_string());
    CHECK(T.gelfand_sup_weight(64).sup.back() <= bound + 0.05);
  }
}

TEST_CASE("normalized_isometry") {
  const std::size_t N = 512;
  const WCOperator id = normalized_isometry(MobiusCoeffs::identity(), SpaceSpec::hardy(), N);
  std::mt19937_64 rng(71);
  const TaylorSeries p = testing::random_poly(rng, 20, N);
  CHECK(max_coeff_diff(id.apply(p), p) < 1e-15);

  const Automorphism psi = Automorphism::canonical(0.5);
  const WCOperator V = normalized_isometry(psi, SpaceSpec::hardy(), N);
  CHECK(std::abs(norm(V.apply(TaylorSeries::identity(N)), SpaceSpec::hardy()) - 1.0) < 1e-6);
  const WCOperator B = normalized_isometry(psi, SpaceSpec::bergman(0), N);
  TaylorSeries f(N);
  f[0] = f[1] = 1;
  const SpaceSpec b0 = SpaceSpec::bergman(0);
  CHECK(std::abs(norm(B.apply(f), b0) - norm(f, b0)) / norm(f, b0) < 1e-6);
}

TEST_CASE("property: isometries preserve norms") {
  std::mt19937_64 rng(72);
  const std::size_t N = 512;
  for (const auto& psi : ten_maps()) {
    for (const SpaceSpec sp : {SpaceSpec::hardy(), SpaceSpec::bergman(0), SpaceSpec::bergman(1)}) {
      const WCOperator V = normalized_isometry(psi, sp, N);
      for (int trial = 0; trial < 3; ++trial) {
        const TaylorSeries f = testing::random_poly(rng, 32, N);
        CAPTURE(psi.canonical_r());
        CAPTURE(sp.to_string());
        CHECK(std::abs(norm(V.apply(f), sp) - norm(f, sp)) / norm(f, sp) < 1e-6);
      }
    }
  }
}

TEST_CASE("galerkin") {
  const std::size_t N = 32;
  const WCOperator I(parse_expr("1"), MobiusCoeffs::identity(), SpaceSpec::bergman(1), N);
  CHECK((I.galerkin() - Eigen::MatrixXcd::Identity(N + 1, N + 1)).norm() < 1e-14);
  const cd c(2, 1);
  const WCOperator C(WeightExpr::constant(c), MobiusCoeffs::identity(), SpaceSpec::hardy(), N);
  CHECK((C.galerkin() - c * Eigen::MatrixXcd::Identity(N + 1, N + 1)).norm() < 1e-14);
  const WCOperator T(parse_expr("1"), Automorphism::canonical(0.5), SpaceSpec::hardy(), N);
  const Eigen::MatrixXcd M = T.galerkin();
  CHECK(std::abs(M(0, 0) - 1.0) < 1e-15);
  CHECK(M.col(0).tail(N).norm() < 1e-15);
}

TEST_CASE("property: matrix action equals series apply") {
  std::mt19937_64 rng(73);
  const std::size_t N = 128;
  for (const SpaceSpec sp : {SpaceSpec::hardy(), SpaceSpec::bergman(2.5)}) {
    const WCOperator T(parse_expr("2+z"), Automorphism::canonical(0.5), sp, N);
    const Eigen::MatrixXcd M = T.galerkin();
    const auto nrm = monomial_norms(sp, N);
    for (int trial = 0; trial < 5; ++trial) {
      const TaylorSeries f = testing::random_poly(rng, N / 2, N);
      Eigen::VectorXcd x(N + 1);
      for (std::size_t k = 0; k <= N; ++k) x[k] = f[k] * nrm[k];
      const Eigen::VectorXcd y = M * x;
      const TaylorSeries g = T.apply(f);
      double d = 0.0;
      for (std::size_t k = 0; k <= N; ++k) d = std::max(d, std::abs(y[k] / nrm[k] - g[k]));
      CHECK(d < 1e-9);
    }
  }
}

TEST_CASE("property: multiplicativity on the guard-banded block") {
  const std::size_t N = 256;
  const WCOperator T(parse_expr("2+z"), Automorphism::canonical(0.5), SpaceSpec::hardy(), N);
  const Eigen::MatrixXcd M = T.galerkin();
  const Eigen::MatrixXcd M2 = T.squared().galerkin();
  const Eigen::MatrixXcd prod = M * M;
  const auto rows = static_cast<Eigen::Index>(N / 2 + 1), cols = static_cast<Eigen::Index>(N / 8 + 1);
  CHECK((prod.topLeftCorner(rows, cols) - M2.topLeftCorner(rows, cols)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("inverse") {
  const Automorphism psi = Automorphism::canonical(0.5);
  const std::size_t N = 512;
  const WCOperator U(parse_expr("1"), psi, SpaceSpec::hardy(), N);
  CHECK(U.inverse().map().projectively_equal(psi.inverse().coeffs(), 1e-14));
  CHECK(U.inverse().weight_series().max_abs() == doctest::Approx(1));

  const WCOperator T(parse_expr("2+z"), psi, SpaceSpec::hardy(), N);
  TaylorSeries f(N);
  f[0] = f[1] = f[2] = 1;
  const TaylorSeries back = T.inverse().apply(T.apply(f));
  CHECK(norm(back - f, SpaceSpec::hardy()) / norm(f, SpaceSpec::hardy()) < 1e-8);
  CHECK(std::abs(T.inverse().weight().evaluate(0.0) - 1.0 / 1.5) < 1e-14);
  CHECK(std::abs(T.inverse().weight_series()[0] - 1.0 / 1.5) < 1e-14);
}

TEST_CASE("property: inverse round trip on degree <= N/4") {
  std::mt19937_64 rng(74);
  const std::size_t N = 256;
  const WCOperator T(parse_expr("exp(0.3*z)/(1 - 0.2*z)"), Automorphism::canonical(0.3), SpaceSpec::bergman(0), N);
  for (int trial = 0; trial < 5; ++trial) {
    const TaylorSeries f = testing::random_poly(rng, N / 4, N);
    const TaylorSeries back = T.inverse().apply(T.apply(f));
    double d = 0.0;
    for (std::size_t k = 0; k <= N / 4; ++k) d = std::max(d, std::abs(back[k] - f[k]));
    CHECK(d < 1e-8);
  }
}

TEST_CASE("non-hyperbolic maps") {
  const MobiusCoeffs rot{std::polar(1.0, 0.4), 0.0, 0.0, 1.0};
  const WCOperator T(parse_expr("2+z"), rot, SpaceSpec::hardy(), 32);
  CHECK(T.kind() == MapKind::Elliptic);
  CHECK_FALSE(T.is_hyperbolic());
  CHECK_THROWS_AS(T.automorphism(), Error);
  CHECK_THROWS_AS(T.symbol(), Error);
  try {
    WCOperator(parse_expr("z"), rot, SpaceSpec::hardy(), 32);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInvertible);
  }
}

}
