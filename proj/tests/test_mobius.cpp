#include <doctest.h>

#include "support.hpp"
#include "wcospec/error.hpp"
#include "wcospec/mobius.hpp"

using namespace wcospec;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

cd finite_diff(const Automorphism& psi, cd z) {
  const double h = 1e-6;
  return (psi(z + h) - psi(z - h)) / (2.0 * h);
}

Automorphism random_automorphism(std::mt19937_64& rng) {
  const double ta = M_PI * testing::unit(rng);
  const double tb = ta + 0.3 + 2.5 * (testing::unit(rng) + 1.0);
  const double la = 0.05 + 0.45 * (testing::unit(rng) + 1.0);
  return Automorphism::from_fixed_points(std::polar(1.0, ta), std::polar(1.0, tb), std::min(la, 0.95));
}

}  // namespace

TEST_SUITE("mobius") {

TEST_CASE("from_fixed_points") {
  const Automorphism psi = Automorphism::from_fixed_points(1.0, -1.0, 1.0 / 3.0);
  CHECK(psi.coeffs().projectively_equal(MobiusCoeffs{2.0, 1.0, 1.0, 2.0}, 1e-12));
  CHECK(std::abs(psi(1.0) - 1.0) < 1e-12);
  CHECK(std::abs(psi(-1.0) + 1.0) < 1e-12);
  CHECK(std::abs(finite_diff(psi, 1.0) - 1.0 / 3.0) < 1e-8);

  CHECK(kind_of([] { Automorphism::from_fixed_points(1.0, -1.0, 1.0); }) == ErrorKind::InvalidMultiplier);
  CHECK(kind_of([] { Automorphism::from_fixed_points(1.0, -1.0, 0.0); }) == ErrorKind::InvalidMultiplier);
  CHECK(kind_of([] { Automorphism::from_fixed_points(1.0, 1.0, 0.5); }) == ErrorKind::InvalidFixedPoints);
  CHECK(kind_of([] { Automorphism::from_fixed_points(1.1, -1.0, 0.5); }) == ErrorKind::InvalidFixedPoints);

  const cd i(0, 1);
  const Automorphism q = Automorphism::from_fixed_points(i, -i, 0.5);
  CHECK(std::abs(q(i) - i) < 1e-12);
  CHECK(std::abs(q(-i) + i) < 1e-12);
}

TEST_CASE("classify") {
  CHECK(classify(Automorphism::canonical(0.5).coeffs()) == MapKind::Hyperbolic);
  CHECK(classify(MobiusCoeffs::identity()) == MapKind::Identity);
  const MobiusCoeffs rot{std::polar(1.0, M_PI / 3), 0.0, 0.0, 1.0};
  CHECK(classify(rot) == MapKind::Elliptic);
  // z -> ((1+i)z - i) / (i z + 1 - i): parabolic with fixed point 1
  const cd i(0, 1);
  CHECK(classify(MobiusCoeffs{1.0 + i, -i, i, 1.0 - i}) == MapKind::Parabolic);
  CHECK(kind_of([] { classify(MobiusCoeffs{2.0, 0.0, 0.0, 1.0}); }) == ErrorKind::NotAutomorphism);
}

TEST_CASE("iterate") {
  const Automorphism psi = Automorphism::canonical(0.5);
  CHECK(psi.iterate(0).projectively_equal(MobiusCoeffs::identity(), 1e-14));
  CHECK(psi.iterate(1).projectively_equal(psi.coeffs(), 1e-14));
  CHECK(std::abs(psi.iterate(20)(0.0) - 1.0) < 1e-6);
  CHECK(std::abs(psi.iterate(-20)(0.0) + 1.0) < 1e-6);
}

TEST_CASE("canonical_r") {
  CHECK(Automorphism::from_fixed_points(1.0, -1.0, 1.0 / 3.0).canonical_r() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(Automorphism::from_fixed_points(1.0, -1.0, 1.0 - 1e-9).canonical_r() < 1e-9);
  const cd i(0, 1);
  const Automorphism q = Automorphism::from_fixed_points(i, -i, 0.5);
  CHECK(q.canonical_r() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // rotation by -i carries the fixed points to 1, -1; the conjugate is canonical
  const MobiusCoeffs rot{-i, 0.0, 0.0, 1.0}, rot_inv{i, 0.0, 0.0, 1.0};
  const MobiusCoeffs conj = rot.compose(q.coeffs()).compose(rot_inv);
  CHECK(conj.projectively_equal(Automorphism::canonical(1.0 / 3.0).coeffs(), 1e-12));
}

TEST_CASE("inverse") {
  const Automorphism psi = Automorphism::canonical(0.5);
  const Automorphism inv = psi.inverse();
  CHECK(inv.coeffs().projectively_equal(MobiusCoeffs{1.0, -0.5, -0.5, 1.0}, 1e-14));
  CHECK(inv.inverse().coeffs().projectively_equal(psi.coeffs(), 1e-14));
  CHECK(std::abs(finite_diff(inv, 1.0) - 3.0) < 1e-6);
  CHECK(std::abs(inv.a() - psi.b()) < 1e-14);
  CHECK(std::abs(inv.b() - psi.a()) < 1e-14);
  CHECK(inv.lambda_a() == doctest::Approx(psi.lambda_a()));
}

TEST_CASE("to_series") {
  CHECK(testing::max_coeff_diff(to_series(MobiusCoeffs::identity(), 16), TaylorSeries::identity(16)) < 1e-15);
  const Automorphism psi = Automorphism::canonical(0.5);
  const TaylorSeries s = psi.to_series(128);
  CHECK(std::abs(s[0] - 0.5) < 1e-15);
  CHECK(std::abs(s.evaluate(0.3) - psi(0.3)) < 1e-12);
}

TEST_CASE("iterate agrees with the matrix power") {
  const Automorphism psi = Automorphism::from_fixed_points(std::polar(1.0, 0.3), std::polar(1.0, 2.2), 0.45);
  for (long n : {-3L, -1L, 1L, 2L, 5L}) CHECK(psi.iterate(n).projectively_equal(psi.coeffs().power(n), 1e-11));
}

TEST_CASE("parabolic tolerance is reported as a constant") { CHECK(kParabolicTolerance == 1e-10); }

TEST_CASE("property: constructed maps") {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 100; ++trial) {
    const Automorphism psi = random_automorphism(rng);
    CHECK(std::abs(psi.derivative(psi.a()) * psi.derivative(psi.b()) - 1.0) < 1e-12);
    CHECK(std::abs(psi.derivative(psi.a()) - psi.lambda_a()) < 1e-12);
    CHECK(std::abs(psi(psi.a()) - psi.a()) < 1e-12);
    CHECK(std::abs(psi(psi.b()) - psi.b()) < 1e-12);
    CHECK(classify(psi.coeffs()) == MapKind::Hyperbolic);
    CHECK(std::abs(psi(0.0)) < 1.0);
    const cd w = psi(std::polar(1.0, 0.7));
    CHECK(std::abs(std::abs(w) - 1.0) < 1e-12);
  }
}

TEST_CASE("property: iterates compose projectively") {
  // Before normalization psi_n has determinant lambda^|n| (a-b)^2, so the
  // identity is only resolvable in double precision while lambda^(|m|+|n|)
  // stays moderate; the tolerance is relative to the coefficient size.
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 100) {
    const Automorphism base = random_automorphism(rng);
    const double la = 0.3 + 0.325 * (testing::unit(rng) + 1.0);
    const Automorphism psi = Automorphism::from_fixed_points(base.a(), base.b(), la);
    const long m = static_cast<long>(rng() % 17) - 8, n = static_cast<long>(rng() % 17) - 8;
    if (std::pow(la, std::abs(m) + std::abs(n)) < 1e-4) continue;
    const MobiusCoeffs lhs = psi.iterate(m + n).normalized();
    const double scale = std::max({1.0, std::abs(lhs.alpha), std::abs(lhs.beta)});
    CHECK(lhs.projectively_equal(psi.iterate(m).compose(psi.iterate(n)), 1e-10 * scale));
    ++checked;
  }
}

TEST_CASE("property: chain rule for iterates") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 5; ++trial) {
    const Automorphism psi = random_automorphism(rng);
    for (int k = 0; k < 10; ++k) {
      const cd z = testing::random_point(rng, 0.95);
      for (long n = 1; n <= 8; ++n) {
        cd prod = 1.0, w = z;
        for (long j = 0; j < n; ++j) {
          prod *= psi.derivative(w);
          w = psi(w);
        }
        const cd direct = psi.iterate(n).derivative(z);
        CHECK(std::abs(direct - prod) <= 1e-9 * std::max(1.0, std::abs(prod)));
      }
    }
  }
}

}
