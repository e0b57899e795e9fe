#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "llgss/circles.hpp"
#include "llgss/errors.hpp"

using namespace llgss;

namespace {

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const Vec3 v{g(rng), g(rng), g(rng)};
  return (1.0 / norm(v)) * v;
}

LimitConstants with_normal(const Vec3& B) {
  LimitConstants lc;
  lc.B = B;
  return lc;
}

}  // namespace

TEST_CASE("geometry of the two limit circles") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const Vec3 B = random_unit(rng);
    const CircleGeom g = build_geometry(with_normal(B));
    CHECK(max_abs_diff(g.B_plus, B) < 1e-15);
    CHECK(max_abs_diff(g.B_minus, Vec3{-B[0], B[1], B[2]}) < 1e-15);
    // Angle between the normals directly from their dot product.
    const double direct = std::acos(std::clamp(dot(g.B_plus, g.B_minus), -1.0, 1.0));
    CHECK(g.angle_normals == doctest::Approx(direct).epsilon(1e-12));
    CHECK(g.angle_normals + g.angle_circles == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  }
}

TEST_CASE("geometry renormalizes and rejects bad normals") {
  const CircleGeom g = build_geometry(with_normal({0.0, 0.6, 0.8005}));
  CHECK(norm(g.B_plus) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(build_geometry(with_normal({0.0, 0.6, 0.81})), DomainError);
  CHECK_THROWS_AS(build_geometry(with_normal({0.0, 0.1, 0.1})), NumericalError);
}

TEST_CASE("distance to a great circle") {
  // Nearest point of the circle is the normalized projection onto the plane.
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 nrm = random_unit(rng);
    const Vec3 p = random_unit(rng);
    const Vec3 proj = p - dot(p, nrm) * nrm;
    const Vec3 q = (1.0 / norm(proj)) * proj;
    const double want = norm(p - q);
    CHECK(dist_to_circle(p, nrm) == doctest::Approx(want).epsilon(1e-12).scale(1.0));
    CHECK(dist_to_plane(p, nrm) == doctest::Approx(std::abs(dot(p, nrm))).epsilon(1e-15));
    CHECK(dist_to_plane(p, nrm) <= dist_to_circle(p, nrm) + 1e-15);
    CHECK(dist_to_circle(q, nrm) < 1e-12);
  }
  // The poles are at chordal distance sqrt 2 from the equator.
  CHECK(dist_to_circle({0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(dist_to_plane({1.0, 0.0, 0.0}, {0.0, 0.0, 1.1}), DomainError);
  CHECK_THROWS_AS(dist_to_circle({1.1, 0.0, 0.0}, {0.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("distance envelope formula") {
  const Params p = make_params(0.5, 0.6);
  const double want = 30.0 * std::sqrt(2.0) * 0.8 / (0.5 * 0.36) * 2.0 * std::exp(-0.15 * 4.0);
  CHECK(dist_envelope(p, 2.0) == doctest::Approx(want).epsilon(1e-14));
  CHECK(dist_envelope(p, -2.0) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("alpha = 1 profile lies on the equator") {
  const Trace t = integrate(make_params(0.8, 1.0), 6.0, 1e-10);
  LimitConstants lc;
  lc.B = {0.0, 0.0, 1.0};
  lc.err_est = t.tol();
  const CircleGeom g = build_geometry(lc);
  CHECK(g.angle_normals == 0.0);
  std::vector<double> grid;
  for (double x = 1.0; x <= 6.0; x += 0.5) {
    grid.push_back(x);
    grid.push_back(-x);
  }
  const BoundReport r = dist_bound_check(t, lc, g, grid);
  CHECK(r.pass);
  for (double d : r.defect) {
    CHECK(d < 1e-9);
  }
  CHECK_THROWS_AS(dist_bound_check(t, lc, g, {0.5}), DomainError);
  CHECK_THROWS_AS(dist_bound_check(t, lc, g, {7.0}), DomainError);
}

TEST_CASE("distance bound and angle at c = alpha = 0.5") {
  const ConstantsRun run = compute_constants(make_params(0.5, 0.5), 1e-8);
  const CircleGeom g = build_geometry(run.matching);
  std::vector<double> grid;
  for (double x = 1.0; x <= run.trace->x_max(); x += 0.25) {
    grid.push_back(x);
    grid.push_back(-x);
  }
  CHECK(dist_bound_check(*run.trace, run.matching, g, grid).pass);
  CHECK(std::abs(g.angle_normals - 1.5951) < 0.01);
  const AngleBound a = angle_bound_check(run.trace->params(), run.matching);
  CHECK(a.c_threshold == doctest::Approx(std::sqrt(0.75) * std::sqrt(std::numbers::pi / 0.5)));
  CHECK_FALSE(a.applicable);
  CHECK(a.pass);
}

TEST_CASE("angle bound in its applicability region") {
  const Params p = make_params(3.0, 0.5);
  const ConstantsRun run = compute_constants(p, 1e-8);
  const AngleBound a = angle_bound_check(p, run.matching);
  CHECK(a.applicable);
  CHECK(a.bound == doctest::Approx(std::numbers::pi * 0.75 / (9.0 * 0.5)));
  CHECK(a.B1_sq <= a.bound);
  CHECK(a.pass);
  CHECK(a.angle_pass);
  CHECK(a.angle_circles >= a.angle_circles_min);
}

TEST_CASE("angle between circles grows with c") {
  const AngleScan s = angle_scan_c(0.8, {1.0, 2.0, 4.0}, 1e-8);
  REQUIRE(s.rows.size() == 3u);
  CHECK(s.increasing);
  for (const AngleRow& r : s.rows) {
    CHECK(r.angle_normals + r.angle_circles == doctest::Approx(std::numbers::pi));
    CHECK_FALSE(r.degraded);
  }
}
