#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "llgss/constants.hpp"
#include "llgss/errors.hpp"

using namespace llgss;

namespace {

// Limit constants built from an arbitrary orthonormal frame: B = b and
// W = e^{i theta} (m + i n) satisfy every identity exactly.
LimitConstants from_frame(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 m{g(rng), g(rng), g(rng)};
  m = (1.0 / norm(m)) * m;
  Vec3 v{g(rng), g(rng), g(rng)};
  Vec3 n = v - dot(v, m) * m;
  n = (1.0 / norm(n)) * n;
  const Vec3 b = cross(m, n);
  const Complex rot = std::polar(1.0, 6.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
  LimitConstants lc;
  lc.B = b;
  for (int j = 0; j < 3; ++j) {
    lc.W[j] = rot * Complex(m[j], n[j]);
  }
  polar_decompose(lc);
  return lc;
}

const ConstantsRun& reference_run() {
  static const ConstantsRun r = compute_constants(make_params(0.5, 0.5), 1e-8);
  return r;
}

}  // namespace

TEST_CASE("identity suite holds for constants built from a frame") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const IdentityReport r = identity_suite(from_frame(rng));
    CHECK(r.pass);
    CHECK(r.max_defect < 1e-13);
    CHECK(r.checks.size() == 10u);
  }
}

TEST_CASE("identity suite rejects a perturbed normal") {
  std::mt19937_64 rng(5);
  LimitConstants lc = from_frame(rng);
  lc.B[1] += 1e-4;
  CHECK_FALSE(identity_suite(lc).pass);
}

TEST_CASE("polar decomposition") {
  LimitConstants lc;
  lc.W = {Complex(0.0, -2.0), Complex(1e-12, 0.0), Complex(-1.0, 0.0)};
  polar_decompose(lc);
  CHECK(lc.rho[0] == 2.0);
  CHECK(lc.phi[0] == doctest::Approx(1.5 * std::numbers::pi).epsilon(1e-15));
  CHECK_FALSE(lc.phi_defined[1]);
  CHECK(lc.phi[1] == 0.0);
  CHECK(lc.phi[2] == doctest::Approx(std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("alpha = 1 constants are exact") {
  // beta = 0 freezes b = e3 and e^{i psi}(m + i n) = e1 + i e2.
  const ConstantsRun r = compute_constants(make_params(0.8, 1.0), 1e-10);
  for (const LimitConstants* lc : {&r.matching, &r.quadrature}) {
    CHECK(max_abs_diff(lc->B, Vec3{0.0, 0.0, 1.0}) < 1e-12);
    CHECK(std::abs(lc->W[0] - Complex(1.0, 0.0)) < 1e-9);
    CHECK(std::abs(lc->W[1] - Complex(0.0, 1.0)) < 1e-9);
    CHECK(std::abs(lc->W[2]) < 1e-9);
  }
  CHECK_FALSE(r.matching.phi_defined[2]);
}

TEST_CASE("reference constants at c = alpha = 0.5") {
  const ConstantsRun& r = reference_run();
  const LimitConstants& lc = r.matching;
  CHECK(lc.route == "matching");
  CHECK(lc.B[0] > -0.73);
  CHECK(lc.B[0] < -0.71);
  CHECK(lc.x_used == r.trace->x_max());
  CHECK(lc.err_est <= 10.0 * 1e-8);
  CHECK_FALSE(lc.degraded);
  CHECK(identity_suite(lc).pass);
  CHECK(identity_suite(lc).max_defect < 1e-6);
  // The two routes agree within their combined estimates.
  CHECK(lc.cross_check <= matching_error(r.trace->params(), lc.x_used) + r.quadrature.err_est +
                              r.stats.max_defect + r.trace->tol());
}

TEST_CASE("quadrature route err_est bounds the gap to the matching route") {
  const ConstantsRun& r = reference_run();
  CHECK(max_abs_diff(r.quadrature.B, r.matching.B) <= r.quadrature.err_est + r.matching.err_est);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(r.quadrature.W[j] - r.matching.W[j]) <= r.quadrature.err_est + r.matching.err_est);
  }
}

TEST_CASE("matching error formula") {
  const Params p = make_params(0.7, 0.6);
  const double x = 8.0;
  const double want = p.beta / (0.49 * std::pow(0.6, 5)) * 64.0 * std::exp(-0.3 * 64.0);
  CHECK(matching_error(p, x) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("choose_x_max") {
  const Params p = make_params(0.5, 0.5);
  double prev = 0.0;
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    const XChoice ch = choose_x_max(p, tol);
    CHECK(ch.x >= 6.0);
    CHECK(ch.x <= 12.0);
    CHECK(ch.x >= prev);
    prev = ch.x;
    if (!ch.degraded) {
      CHECK(ch.err_est <= tol);
    }
  }
  const XChoice cheap = choose_x_max(p, 1e-10, 1e6);
  CHECK(cheap.degraded);
  CHECK(cheap.projected_cost <= 1e6);
  CHECK_THROWS_AS(choose_x_max(p, 0.0), DomainError);
}

TEST_CASE("matching needs x_max of at least 6") {
  const Trace t = integrate(make_params(1.0, 0.8), 5.0, 1e-8);
  CHECK_THROWS(extract_by_matching(t, 1e-8));
}

TEST_CASE("continuity scan is smooth for small steps in c") {
  const auto rows = continuity_scan(0.8, {1.0, 1.02, 1.04}, 1e-8);
  REQUIRE(rows.size() == 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].max_step_from_previous > 0.0);
    CHECK(rows[i].max_step_from_previous < 0.05);
    CHECK_FALSE(rows[i].flagged);
  }
  CHECK_THROWS_AS(continuity_scan(0.8, {0.001}, 1e-8), DomainError);
}
