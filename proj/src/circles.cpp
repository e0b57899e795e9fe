#include "llgss/circles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "llgss/errors.hpp"

namespace llgss {

namespace {

double clamped_acos(double v) { return std::acos(std::clamp(v, -1.0, 1.0)); }

void require_unit(const Vec3& v, double tol, const char* what) {
  if (!(std::abs(norm(v) - 1.0) <= tol)) {
    throw DomainError(what);
  }
}

AngleRow angle_row(const Params& p, double tol, double budget) {
  AngleRow r;
  r.c = p.c;
  r.alpha = p.alpha;
  const ConstantsRun run = compute_constants(p, tol, 0.0, budget);
  const CircleGeom g = build_geometry(run.matching);
  r.B1 = g.B_plus[0];
  r.angle_normals = g.angle_normals;
  r.angle_circles = g.angle_circles;
  r.err_est = run.matching.err_est;
  r.degraded = run.matching.degraded || run.choice.degraded;
  return r;
}

AngleScan finish(std::vector<AngleRow> rows) {
  AngleScan s;
  s.rows = std::move(rows);
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    if (s.rows[i].angle_circles < s.rows[i - 1].angle_circles) {
      s.increasing = false;
    }
  }
  return s;
}

}  // namespace

CircleGeom build_geometry(const LimitConstants& lc) {
  const double len = norm(lc.B);
  if (!(len >= 0.5)) {
    throw NumericalError("degenerate limit normal: |B| < 0.5");
  }
  if (std::abs(len - 1.0) > 1e-3) {
    throw DomainError("limit normal must have |B| within 1e-3 of 1");
  }
  CircleGeom g;
  for (int j = 0; j < 3; ++j) {
    g.B_plus[j] = lc.B[j] / len;
  }
  g.B_minus = {-g.B_plus[0], g.B_plus[1], g.B_plus[2]};
  g.angle_normals = clamped_acos(dot(g.B_plus, g.B_minus));
  g.angle_circles = std::numbers::pi - g.angle_normals;
  return g;
}

double dist_to_plane(const Vec3& point, const Vec3& normal) {
  require_unit(normal, 1e-9, "plane normal must be a unit vector");
  return std::abs(dot(point, normal));
}

double dist_to_circle(const Vec3& point, const Vec3& normal) {
  require_unit(point, 1e-6, "point must lie on the unit sphere");
  const double d = dist_to_plane(point, normal);
  const double s = std::sqrt(std::max(0.0, 1.0 - d * d));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * s));
}

double dist_envelope(const Params& p, double x) {
  return 30.0 * std::numbers::sqrt2 * p.beta / (p.c * p.alpha * p.alpha) * std::abs(x) *
         std::exp(-0.25 * p.alpha * x * x);
}

BoundReport dist_bound_check(const Trace& trace, const LimitConstants& lc, const CircleGeom& geom,
                             const std::vector<double>& grid) {
  const Params& p = trace.params();
  BoundReport r;
  r.name = "dist_circle";
  r.factor = 1.0;
  r.floor = 2.0 * lc.err_est + 2.0 * trace.stats().max_defect;
  std::vector<double> pos;
  std::vector<double> neg;
  for (double x : grid) {
    if (!(std::abs(x) >= 1.0 && std::abs(x) <= trace.x_max())) {
      throw DomainError("dist_bound_check: grid must satisfy 1 <= |x| <= x_max");
    }
    (x > 0.0 ? pos : neg).push_back(x);
  }
  // Both halves are read through the cursor in increasing |x|.
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end(), [](double a, double b) { return a > b; });
  TraceCursor cur(trace);
  for (double x : pos) {
    const Vec3 m = cur.at(x).frame.m;
    r.add(x, dist_to_circle(m, geom.B_plus), dist_envelope(p, x));
  }
  TraceCursor cur_neg(trace);
  for (double x : neg) {
    const Vec3 m = reflect(cur_neg.at(-x)).frame.m;
    r.add(x, dist_to_circle(m, geom.B_minus), dist_envelope(p, x));
  }
  return r;
}

AngleBound angle_bound_check(const Params& p, const LimitConstants& lc) {
  AngleBound a;
  a.c_threshold = p.beta * std::sqrt(std::numbers::pi / p.alpha);
  a.applicable = p.c >= a.c_threshold;
  const double B1 = lc.B[0];
  a.B1_sq = B1 * B1;
  a.bound = std::numbers::pi * p.beta * p.beta / (p.c * p.c * p.alpha);
  a.slack = 2.0 * std::abs(B1) * lc.err_est + lc.err_est * lc.err_est;
  a.angle_circles = clamped_acos(2.0 * a.B1_sq - 1.0);
  if (a.applicable) {
    a.pass = a.B1_sq <= a.bound + a.slack;
    a.angle_circles_min = clamped_acos(-1.0 + 2.0 * a.bound);
    a.angle_pass = a.angle_circles >= clamped_acos(-1.0 + 2.0 * (a.bound + a.slack));
  }
  return a;
}

AngleScan angle_scan_c(double alpha, const std::vector<double>& c_grid, double tol, double budget) {
  std::vector<AngleRow> rows;
  for (double c : c_grid) {
    rows.push_back(angle_row(make_params(c, alpha), tol, budget));
  }
  return finish(std::move(rows));
}

AngleScan angle_scan_alpha(double c, const std::vector<double>& alpha_grid, double tol, double budget) {
  std::vector<AngleRow> rows;
  for (double a : alpha_grid) {
    rows.push_back(angle_row(make_params(c, a), tol, budget));
  }
  return finish(std::move(rows));
}

}  // namespace llgss
