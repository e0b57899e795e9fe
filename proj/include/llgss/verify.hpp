#pragma once

// Every bound and identity check for one (c, alpha), aggregated.

#include <cstdint>
#include <string>
#include <vector>

#include "llgss/asymptotics.hpp"
#include "llgss/circles.hpp"

namespace llgss {

struct CheckResult {
  std::string name;
  bool pass = true;
  double max_ratio = 0.0;  ///< measured / allowed; 0 when the check has no envelope
  std::string note;
};

struct VerifyReport {
  Params params;
  double x_max = 0.0;
  LimitConstants constants;
  CircleGeom geometry;
  std::vector<CheckResult> checks;
  bool pass = true;
};

struct VerifyOptions {
  double tol = 1e-10;
  double x_max = 0.0;  ///< 0 picks it from the matching error
  double budget = kDefaultBudget;
  double grid_spacing = 0.25;
  std::uint64_t seed = 12345;
  bool oscillatory = true;  ///< include the oscillatory-integral lemmas
  bool shrinker = true;     ///< include the space-time checks
};

/// Identity suite, route agreement, asymptotic envelopes, circle distances,
/// angle bound where applicable, and the space-time checks.
VerifyReport verify_all(const Params& p, const VerifyOptions& opt);

/// Bound checks only (the asymptotic, oscillatory and distance envelopes)
/// for an existing trace and its constants.
std::vector<CheckResult> bound_checks(const Trace& trace, const LimitConstants& lc, const CircleGeom& geom,
                                      double grid_spacing, bool oscillatory);

}  // namespace llgss
