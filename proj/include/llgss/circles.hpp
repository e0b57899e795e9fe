#pragma once

// Limit planes P+- through the origin with normals B+- and the great circles
// C+- = P+- on S^2 that the profile approaches as x -> +-inf.

#include <vector>

#include "llgss/constants.hpp"
#include "llgss/report.hpp"

namespace llgss {

struct CircleGeom {
  Vec3 B_plus{};   ///< (B1, B2, B3), renormalized
  Vec3 B_minus{};  ///< (-B1, B2, B3)
  double angle_normals = 0.0;  ///< arccos(B+ . B-) = arccos(1 - 2 B1^2)
  double angle_circles = 0.0;  ///< pi - angle_normals = arccos(2 B1^2 - 1)
};

/// Requires | |B| - 1 | <= 1e-3; throws NumericalError when |B| < 0.5.
CircleGeom build_geometry(const LimitConstants& lc);

/// |point . normal|; normal must be a unit vector to 1e-9.
double dist_to_plane(const Vec3& point, const Vec3& normal);

/// Chordal distance from a unit point to the great circle normal to `normal`.
double dist_to_circle(const Vec3& point, const Vec3& normal);

/// (30 sqrt 2 beta / (c alpha^2)) |x| e^{-alpha x^2/4}.
double dist_envelope(const Params& p, double x);

/// dist(m(x), C+) for x > 0 and dist(m(x), C-) for x < 0 against
/// dist_envelope with factor 1. Grid points need 1 <= |x| <= x_max.
BoundReport dist_bound_check(const Trace& trace, const LimitConstants& lc, const CircleGeom& geom,
                             const std::vector<double>& grid);

struct AngleBound {
  double c_threshold = 0.0;  ///< beta sqrt(pi / alpha)
  bool applicable = false;   ///< c >= c_threshold
  double B1_sq = 0.0;
  double bound = 0.0;        ///< pi beta^2 / (c^2 alpha)
  double slack = 0.0;        ///< allowance for the uncertainty of B1
  bool pass = true;          ///< B1^2 <= bound + slack; true when not applicable
  double angle_circles = 0.0;
  double angle_circles_min = 0.0;  ///< arccos(-1 + 2 bound), applicable case only
  bool angle_pass = true;
};

AngleBound angle_bound_check(const Params& p, const LimitConstants& lc);

struct AngleRow {
  double c = 0.0;
  double alpha = 0.0;
  double B1 = 0.0;
  double angle_normals = 0.0;
  double angle_circles = 0.0;
  double err_est = 0.0;
  bool degraded = false;
};

struct AngleScan {
  std::vector<AngleRow> rows;
  bool increasing = true;  ///< angle_circles non-decreasing along the grid (trend only)
};

/// angle_circles along a grid in c (alpha fixed) or in alpha (c fixed).
AngleScan angle_scan_c(double alpha, const std::vector<double>& c_grid, double tol, double budget = kDefaultBudget);
AngleScan angle_scan_alpha(double c, const std::vector<double>& alpha_grid, double tol,
                           double budget = kDefaultBudget);

}  // namespace llgss
