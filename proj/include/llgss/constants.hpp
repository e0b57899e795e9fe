#pragma once

// Limit constants B = lim b(x) and W = lim e^{i c Phi(x)} (m + i n)(x), by the
// limit-integral formulas and by matching the large-x expansion at x_max.

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "llgss/frame.hpp"

namespace llgss {

inline constexpr double kPhaseUndefined = 1e-10;  ///< rho below this has no phase

struct LimitConstants {
  Vec3 B{};
  CVec3 W{};
  Vec3 rho{};
  Vec3 phi{};  ///< arg W_j in [0, 2 pi); 0 when undefined
  std::array<bool, 3> phi_defined{};
  double err_est = 0.0;
  double x_used = 0.0;
  bool degraded = false;
  std::string route;
  int iterations = 0;
  double cross_check = 0.0;  ///< max componentwise gap to the other route (matching only)
};

/// Fills rho, phi and phi_defined from W.
void polar_decompose(LimitConstants& lc);

/// B = b(0) - (beta/2c) iB(X), W = w(0) + (beta/2c) iW(X) with X = trace end.
/// err_est is the rigorous tail bound beyond X. Throws NumericalError when
/// err_est > 10 tol unless allow_degraded, in which case the flag is set.
LimitConstants extract_by_quadrature(const Trace& trace, double tol, bool allow_degraded = false);

/// Matching error magnitude (beta / (c^2 alpha^5)) X^2 e^{-alpha X^2 / 2}.
double matching_error(const Params& p, double x);

/// Fixed-point solve of the large-x expansions of b and w at the trace end
/// (requires x_max >= 6), cross-checked against the quadrature route: the
/// matching magnitude is reported while the routes agree within the sum of
/// their estimates, the observed gap otherwise.
LimitConstants extract_by_matching(const Trace& trace, double tol);

struct IdentityCheck {
  std::string name;
  double defect = 0.0;
  bool pass = true;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  double threshold = 0.0;
  double max_defect = 0.0;
  bool pass = true;
};

/// Norm identities and the algebraic relations among B, rho, phi.
IdentityReport identity_suite(const LimitConstants& lc);

struct XChoice {
  double x = 6.0;
  double err_est = 0.0;       ///< matching error at x
  double projected_cost = 0.0;
  bool degraded = false;      ///< tol not reached below the cap or the budget
};

/// Smallest X in [6, 12] whose matching error is below tol, reduced to what
/// the evaluation budget allows.
XChoice choose_x_max(const Params& p, double tol, double budget = kDefaultBudget);

struct ConstantsRun {
  XChoice choice;
  std::shared_ptr<const Trace> trace;
  TraceStats stats;
  LimitConstants matching;
  LimitConstants quadrature;
};

/// Integrates to choose_x_max(...) (or the given x_max when positive) and
/// extracts by both routes. Integration uses tol clamped to [1e-12, 1e-8].
ConstantsRun compute_constants(const Params& p, double tol, double x_max = 0.0, double budget = kDefaultBudget);

struct ContinuityRow {
  double c = 0.0;
  LimitConstants lc;
  double max_step_from_previous = 0.0;  ///< max |B - B_prev| componentwise
  bool flagged = false;
};

/// Constants along a c grid at fixed alpha. Requires every c in [0.005, 10].
std::vector<ContinuityRow> continuity_scan(double alpha, const std::vector<double>& c_grid, double tol,
                                           double budget = kDefaultBudget);

}  // namespace llgss
