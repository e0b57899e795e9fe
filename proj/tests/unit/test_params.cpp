#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "llgss/errors.hpp"
#include "llgss/params.hpp"

using namespace llgss;

namespace {

// Power series of int_0^x e^{a s^2/4} ds, summed in long double.
double phi_series(double alpha, double x) {
  long double term = x;
  long double sum = 0.0L;
  const long double q = 0.25L * alpha * x * x;
  for (int n = 0; n < 400; ++n) {
    sum += term / (2 * n + 1);
    term *= q / (n + 1);
    if (term < 1e-22L * sum) {
      break;
    }
  }
  return static_cast<double>(sum);
}

// Composite Simpson on [x, x + len] for s^n e^{-gamma s^2}.
double tail_simpson(double gamma, int n, double x, double len) {
  const int m = 200000;
  const double h = len / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double s = x + i * h;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::pow(s, n) * std::exp(-gamma * s * s);
  }
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("make_params validates and derives beta") {
  const Params p = make_params(0.5, 0.6);
  CHECK(p.beta == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(make_params(1.0, 1.0).beta == 0.0);
  CHECK_THROWS_AS(make_params(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(make_params(-1.0, 0.5), DomainError);
  CHECK_THROWS_AS(make_params(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(make_params(1.0, 1.5), DomainError);
  CHECK_THROWS_AS(make_params(NAN, 0.5), DomainError);
  CHECK_THROWS_AS(make_params(1.0, INFINITY), DomainError);
}

TEST_CASE("phi matches its power series") {
  for (double alpha : {0.1, 0.3, 0.5, 0.8, 1.0}) {
    for (double x : {0.0, 0.1, 0.7, 1.5, 3.0, 5.0}) {
      const double ref = phi_series(alpha, x);
      CHECK(std::abs(phi(alpha, x) - ref) <= 1e-13 * std::max(1.0, ref));
    }
  }
}

TEST_CASE("phi is odd and increasing") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xs(-6.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    const double x = xs(rng);
    CHECK(phi(0.5, -x) == doctest::Approx(-phi(0.5, x)).epsilon(1e-14));
    CHECK(phi(0.5, x + 0.01) > phi(0.5, x));
  }
}

TEST_CASE("phi beyond its cap is rejected") {
  CHECK_THROWS_AS(phi(0.5, phi_cap(0.5) * 1.01), DomainError);
  CHECK(std::isfinite(phi(0.5, 0.99 * phi_cap(0.5))));
}

TEST_CASE("phi_asymptotic within 1e-4 where the omitted term is small") {
  for (double alpha : {0.5, 1.0}) {
    for (double x = 3.0 / std::sqrt(alpha); x <= std::min(20.0, 0.9 * phi_cap(alpha)); x += 0.25) {
      const double omitted = 120.0 / std::pow(alpha * x * x, 3);
      const double rel = std::abs(phi_asymptotic(alpha, x) / phi(alpha, x) - 1.0);
      CHECK(rel <= 2.0 * omitted);
      if (omitted < 5e-5) {
        CHECK(rel < 1e-4);
      }
    }
  }
}

TEST_CASE("phi_asymptotic misses 1e-4 at x = 4 for small alpha") {
  // The first omitted term 120/(alpha^3 x^6) dominates here; documents the
  // region where a three-term expansion cannot meet 1e-4.
  const double rel = std::abs(phi_asymptotic(0.3, 6.0) / phi(0.3, 6.0) - 1.0);
  CHECK(rel > 1e-4);
  CHECK_THROWS_AS(phi_asymptotic(0.3, 4.0), DomainError);
}

TEST_CASE("phase_value reduces c phi") {
  const Params p = make_params(0.5, 0.5);
  for (double x : {0.0, 1.0, 4.0, 7.5}) {
    const PhaseValue v = phase_value(p, x);
    CHECK(v.psi >= 0.0);
    CHECK(v.psi < 2.0 * std::numbers::pi);
    const double turns = (p.c * v.phi - v.psi) / (2.0 * std::numbers::pi);
    CHECK(std::abs(turns - std::round(turns)) < 1e-9);
  }
}

TEST_CASE("reduce_angle maps into [0, 2 pi)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> th(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double t = th(rng);
    const double r = reduce_angle(t);
    CHECK(r >= 0.0);
    CHECK(r < 2.0 * std::numbers::pi);
    CHECK(std::abs(std::remainder(t - r, 2.0 * std::numbers::pi)) < 1e-9);
  }
  CHECK(reduce_angle(-1e-300) < 2.0 * std::numbers::pi);
}

TEST_CASE("gauss_tail against Simpson quadrature") {
  for (double gamma : {0.1, 0.25, 0.6, 1.0}) {
    for (int n = 0; n <= 3; ++n) {
      for (double x : {0.5, 1.0, 2.5}) {
        const double len = std::sqrt(60.0 / gamma);
        const double ref = tail_simpson(gamma, n, x, len);
        CHECK(gauss_tail(gamma, n, x) == doctest::Approx(ref).epsilon(1e-10));
      }
    }
  }
  CHECK_THROWS_AS(gauss_tail(0.0, 0, 1.0), DomainError);
  CHECK_THROWS_AS(gauss_tail(1.0, 4, 1.0), DomainError);
}

TEST_CASE("tail bounds bracket the exact tail") {
  for (double gamma : {0.05, 0.3, 1.0}) {
    for (double x = 1.0; x <= 8.0; x += 0.5) {
      for (int n = 0; n <= 3; ++n) {
        CHECK(gauss_tail(gamma, n, x) <= tail_bound(gamma, n, x) * (1.0 + 1e-14));
      }
      CHECK(tail_lower_bound_n0(gamma, x) <= gauss_tail(gamma, 0, x));
    }
  }
  CHECK_THROWS_AS(tail_bound(1.5, 0, 1.0), DomainError);
  CHECK_THROWS_AS(tail_bound(0.5, 2, 0.5), DomainError);
}

TEST_CASE("limit_integral_tail decreases and truncation_point meets tol") {
  const Params p = make_params(0.5, 0.5);
  double prev = HUGE_VAL;
  for (double x = 2.0; x <= 12.0; x += 0.5) {
    const double t = limit_integral_tail(p, x);
    CHECK(t < prev);
    prev = t;
  }
  for (double tol : {1e-4, 1e-6, 1e-8}) {
    const TruncationPoint tp = truncation_point(p, tol);
    CHECK(tp.x >= kTruncationFloor);
    CHECK(tp.x <= kTruncationCap);
    if (!tp.degraded) {
      CHECK(tp.tail <= tol);
    }
  }
  CHECK(truncation_point(p, 1e-8).x >= truncation_point(p, 1e-6).x);
  CHECK(limit_integral_tail(make_params(0.5, 1.0), 5.0) == 0.0);
}
