// Complex polygamma and stable elementary helpers. Complex reference points
// were frozen from an independent arbitrary-precision evaluation.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>

#include "specbound/math/polygamma.hpp"
#include "specbound/math/stable.hpp"

using namespace specbound;
using Complex = std::complex<double>;

namespace {
constexpr double kPi = 3.14159265358979323846;

double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::abs(want);
}
}  // namespace

TEST_CASE("trigamma at classic rational points") {
  const Complex t1 = math::polygamma(1, Complex{1.0, 0.0});
  CHECK(std::abs(t1.real() - kPi * kPi / 6.0) <= 1e-12 * (kPi * kPi / 6.0));
  CHECK(std::abs(t1.imag()) <= 1e-14);
  const Complex th = math::polygamma(1, Complex{0.5, 0.0});
  CHECK(std::abs(th.real() - kPi * kPi / 2.0) <= 1e-12 * (kPi * kPi / 2.0));
  CHECK(std::abs(th.imag()) <= 1e-14);
}

TEST_CASE("complex polygamma matches frozen high-precision values") {
  CHECK(rel_err(math::polygamma(1, {1.0, 1.0}),
                {0.4630000966227637863, -0.79423354275931886558}) < 1e-12);
  CHECK(rel_err(math::polygamma(2, {1.0, 1.0}),
                {0.36855293158793517174, 0.7666528503450662124}) < 1e-12);
  CHECK(rel_err(math::polygamma(3, {2.0, -0.7}),
                {0.14222760496194167586, 0.36627043947804737703}) < 1e-12);
  // Argument pattern that arises in correlation formulas at high temperature:
  // z = (1 + i*cutoff*t)/(beta*cutoff) with beta*cutoff small.
  CHECK(rel_err(math::polygamma(2, {0.19047619047619047, 7.142857142857143}),
                {0.019585257999029302957, -0.0017090855564192898776}) < 1e-12);
  CHECK(rel_err(math::polygamma(4, {5.0, 3.0}),
                {0.004753563186541647053, 0.0050467707590820663149}) < 1e-12);
}

TEST_CASE("polygamma order n+1 matches a finite difference of order n") {
  // Central difference of psi^(1) approximates psi^(2); step chosen so the
  // truncation error sits well below the 1e-6 target.
  const Complex z{1.0, 1.0};
  const double h = 1e-4;
  const Complex fd =
      (math::polygamma(1, z + Complex{h, 0.0}) - math::polygamma(1, z - Complex{h, 0.0})) /
      (2.0 * h);
  CHECK(rel_err(fd, math::polygamma(2, z)) < 1e-6);

  const Complex z2{2.0, -0.7};
  const Complex fd3 =
      (math::polygamma(2, z2 + Complex{h, 0.0}) - math::polygamma(2, z2 - Complex{h, 0.0})) /
      (2.0 * h);
  CHECK(rel_err(fd3, math::polygamma(3, z2)) < 1e-6);
}

TEST_CASE("polygamma respects the conjugation symmetry") {
  for (int n : {1, 2, 3, 4}) {
    const Complex z{1.3, 0.9};
    const Complex a = math::polygamma(n, z);
    const Complex b = math::polygamma(n, std::conj(z));
    CHECK(std::abs(b - std::conj(a)) <= 1e-14 * std::abs(a));
  }
}

TEST_CASE("polygamma rejects the left half plane and bad orders") {
  CHECK_THROWS_AS(math::polygamma(1, Complex{0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(math::polygamma(1, Complex{-2.0, 0.5}), DomainError);
  CHECK_THROWS_AS(math::polygamma(0, Complex{1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(math::polygamma(-1, Complex{1.0, 0.0}), DomainError);
}

TEST_CASE("real coth is accurate for tiny and huge arguments") {
  // Series: coth(x) = 1/x + x/3 - x^3/45 + ...
  for (double x : {1e-8, 1e-4, 0.01}) {
    const double series = 1.0 / x + x / 3.0 - x * x * x / 45.0;
    CHECK(math::coth(x) == Catch::Approx(series).epsilon(1e-12));
  }
  CHECK(math::coth(800.0) == 1.0);
  CHECK(math::coth(std::numeric_limits<double>::infinity()) == 1.0);
  CHECK_THROWS_AS(math::coth(0.0), DomainError);
  CHECK_THROWS_AS(math::coth(-3.0), DomainError);
}

TEST_CASE("complex coth saturates without overflow at large real part") {
  const Complex a = math::coth(Complex{700.0, 3.0});
  CHECK(std::isfinite(a.real()));
  CHECK(std::abs(a - Complex{1.0, 0.0}) < 1e-15);
  CHECK_THROWS_AS(math::coth(Complex{-700.0, 3.0}), DomainError);
  // Moderate argument agrees with the direct ratio.
  const Complex z{0.8, 0.6};
  const Complex direct = std::cosh(z) / std::sinh(z);
  CHECK(std::abs(math::coth(z) - direct) <= 1e-14 * std::abs(direct));
}

TEST_CASE("compensated summation recovers a small term against a large one") {
  math::KahanSum s;
  s.add(1.0);
  for (int i = 0; i < 10000; ++i) s.add(1e-16);
  CHECK(s.value() == Catch::Approx(1.0 + 1e-12).epsilon(1e-12));

  // Naive summation collapses this to 0; compensation keeps the residual to
  // within half an ulp of the large intermediate.
  math::KahanSum t;
  t.add(1.0);
  t.add(1e-16);
  t.add(-1.0);
  CHECK(t.value() > 0.0);
  CHECK(std::abs(t.value() - 1e-16) <= 1.2e-17);
}
