#include "llgss/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "llgss/errors.hpp"

namespace llgss {

namespace {

// The frame's accumulated phase error, the part of W not seen by either
// route, ran 4-5 times its orthonormality defect in runs against a halved
// step guard.
double frame_drift(const Trace& trace) { return 10.0 * trace.stats().max_defect; }

constexpr double kMatchingFloor = 6.0;
constexpr int kMaxIterations = 10;

double max_gap(const LimitConstants& a, const LimitConstants& b) {
  double g = 0.0;
  for (int j = 0; j < 3; ++j) {
    g = std::max({g, std::abs(a.B[j] - b.B[j]), std::abs(a.W[j] - b.W[j])});
  }
  return g;
}

}  // namespace

void polar_decompose(LimitConstants& lc) {
  for (int j = 0; j < 3; ++j) {
    lc.rho[j] = std::abs(lc.W[j]);
    lc.phi_defined[j] = lc.rho[j] > kPhaseUndefined;
    lc.phi[j] = lc.phi_defined[j] ? reduce_angle(std::arg(lc.W[j])) : 0.0;
  }
}

LimitConstants extract_by_quadrature(const Trace& trace, double tol, bool allow_degraded) {
  const Params& p = trace.params();
  const AugmentedState& s0 = trace.initial();
  const AugmentedState& sx = trace.final_state();
  const double X = sx.frame.x;
  if (!(X > 0.0)) {
    throw DomainError("extract_by_quadrature: trace must extend to positive x");
  }
  const double f = p.beta / (2.0 * p.c);
  LimitConstants lc;
  lc.route = "quadrature";
  lc.x_used = X;
  for (int j = 0; j < 3; ++j) {
    lc.B[j] = s0.frame.b[j] - f * sx.iB[j];
    lc.W[j] = Complex(s0.frame.m[j], s0.frame.n[j]) + f * sx.iW[j];
  }
  polar_decompose(lc);
  // Accumulated integration drift, seen through the orthonormality defect,
  // bounds how well the accumulators themselves are known.
  lc.err_est = std::max(p.beta == 0.0 ? 0.0 : limit_integral_tail(p, X), frame_drift(trace));
  if (lc.err_est > 10.0 * tol) {
    if (!allow_degraded) {
      std::ostringstream os;
      os << "extract_by_quadrature: tail bound " << lc.err_est << " at X = " << X << " exceeds 10 tol = " << 10.0 * tol;
      throw NumericalError(os.str());
    }
    lc.degraded = true;
  }
  return lc;
}

double matching_error(const Params& p, double x) {
  const double a = p.alpha;
  return p.beta / (p.c * p.c * a * a * a * a * a) * x * x * std::exp(-0.5 * a * x * x);
}

LimitConstants extract_by_matching(const Trace& trace, double tol) {
  const Params& p = trace.params();
  const AugmentedState& s = trace.final_state();
  const double X = s.frame.x;
  if (trace.x_start() != 0.0 || X < kMatchingFloor) {
    throw DomainError("extract_by_matching: needs a trace over [0, X] with X >= 6");
  }
  const Complex rot = std::polar(1.0, s.psi);
  const double decay = std::exp(-0.25 * p.alpha * X * X);
  const double fb = p.beta * X / (2.0 * p.c) * decay;
  const Complex denom(1.0, p.beta * p.beta / (8.0 * p.c) * gauss_tail(0.25 * p.alpha, 2, X));

  Vec3 B = s.frame.b;
  CVec3 W;
  for (int j = 0; j < 3; ++j) {
    W[j] = rot * Complex(s.frame.m[j], s.frame.n[j]);
  }
  int it = 0;
  double prev_change = HUGE_VAL;
  for (;;) {
    Vec3 Bn;
    CVec3 Wn;
    for (int j = 0; j < 3; ++j) {
      Bn[j] = s.frame.b[j] - fb * (std::conj(rot) * W[j]).real();
      Wn[j] = (rot * Complex(s.frame.m[j], s.frame.n[j]) + fb * B[j] * rot) / denom;
    }
    double change = 0.0;
    for (int j = 0; j < 3; ++j) {
      change = std::max({change, std::abs(Bn[j] - B[j]), std::abs(Wn[j] - W[j])});
    }
    B = Bn;
    W = Wn;
    ++it;
    if (change < tol || it >= kMaxIterations) {
      break;
    }
    if (it >= 2 && change > prev_change) {
      std::ostringstream os;
      os << "extract_by_matching: iteration does not contract at X = " << X << " (change " << change << ")";
      throw NumericalError(os.str());
    }
    prev_change = change;
  }

  LimitConstants lc;
  lc.route = "matching";
  lc.B = B;
  lc.W = W;
  lc.x_used = X;
  lc.iterations = it;
  polar_decompose(lc);
  const double e_match = matching_error(p, X);
  const LimitConstants q = extract_by_quadrature(trace, tol, true);
  lc.cross_check = max_gap(lc, q);
  // The C = 1 magnitude stands only while the independent route agrees within
  // the two estimates; otherwise the observed gap is the honest figure.
  lc.err_est = lc.cross_check <= e_match + q.err_est ? e_match : std::max(lc.cross_check, e_match);
  lc.err_est = std::max(lc.err_est, frame_drift(trace));
  lc.degraded = lc.err_est > 10.0 * tol;
  return lc;
}

IdentityReport identity_suite(const LimitConstants& lc) {
  IdentityReport r;
  r.threshold = 10.0 * lc.err_est + 1e-6;
  auto add = [&r](std::string name, double defect) {
    const bool ok = defect < r.threshold;
    r.checks.push_back({std::move(name), defect, ok});
    r.max_defect = std::max(r.max_defect, defect);
    r.pass = r.pass && ok;
  };
  const Vec3& B = lc.B;
  const Vec3& rho = lc.rho;
  const Vec3& ph = lc.phi;
  add("norm_B", std::abs(norm(B) - 1.0));
  add("sum_rho_sq", std::abs(dot(rho, rho) - 2.0));
  for (int j = 0; j < 3; ++j) {
    add("rho_B_" + std::to_string(j + 1), std::abs(rho[j] * rho[j] + B[j] * B[j] - 1.0));
  }
  // Cyclic: B_j = rho_k rho_l sin(phi_l - phi_k) for (j, k, l) = (1, 2, 3), (2, 3, 1), (3, 1, 2).
  // An undefined phase only ever appears multiplied by its vanishing modulus.
  for (int j = 0; j < 3; ++j) {
    const int k = (j + 1) % 3;
    const int l = (j + 2) % 3;
    add("cross_" + std::to_string(j + 1), std::abs(B[j] - rho[k] * rho[l] * std::sin(ph[l] - ph[k])));
  }
  Complex s2 = 0.0;
  Complex s3 = 0.0;
  for (int j = 0; j < 3; ++j) {
    s2 += B[j] * std::polar(rho[j], ph[j]);
    s3 += rho[j] * rho[j] * std::polar(1.0, 2.0 * ph[j]);
  }
  add("sum_B_W", std::abs(s2));
  add("sum_W_sq", std::abs(s3));
  return r;
}

XChoice choose_x_max(const Params& p, double tol, double budget) {
  if (!(tol > 0.0)) {
    throw DomainError("tol must be positive");
  }
  auto bisect = [](auto pred, double lo, double hi) {
    // pred(lo) false, pred(hi) true; returns the smallest x with pred true to 1e-3.
    for (int i = 0; i < 60 && hi - lo > 1e-3; ++i) {
      const double mid = 0.5 * (lo + hi);
      (pred(mid) ? hi : lo) = mid;
    }
    return hi;
  };
  XChoice ch;
  double x_need = kMatchingFloor;
  bool reachable = true;
  auto good = [&p, tol](double x) { return matching_error(p, x) <= tol; };
  if (!good(kMatchingFloor)) {
    if (good(kTruncationCap)) {
      x_need = bisect(good, kMatchingFloor, kTruncationCap);
    } else {
      x_need = kTruncationCap;
      reachable = false;
    }
  }
  auto affordable = [&p, budget](double x) { return projected_rhs_evals(p, x) <= budget; };
  if (!affordable(kMatchingFloor)) {
    std::ostringstream os;
    os << "choose_x_max: even X = 6 exceeds the budget of " << budget << " evaluations (c = " << p.c
       << ", alpha = " << p.alpha << ")";
    throw NumericalError(os.str());
  }
  double x = x_need;
  if (!affordable(x)) {
    // Largest affordable X: smallest unaffordable, minus the bisection slack.
    x = bisect([&](double v) { return !affordable(v); }, kMatchingFloor, x) - 1e-3;
    reachable = false;
  }
  ch.x = x;
  ch.err_est = matching_error(p, x);
  ch.projected_cost = projected_rhs_evals(p, x);
  ch.degraded = !reachable;
  return ch;
}

ConstantsRun compute_constants(const Params& p, double tol, double x_max, double budget) {
  ConstantsRun run;
  if (x_max > 0.0) {
    run.choice.x = x_max;
    run.choice.err_est = matching_error(p, x_max);
    run.choice.projected_cost = projected_rhs_evals(p, x_max);
    run.choice.degraded = run.choice.err_est > tol;
  } else {
    run.choice = choose_x_max(p, tol, budget);
  }
  IntegrateOptions opt;
  opt.tol = std::clamp(tol, 1e-12, 1e-8);
  opt.budget = budget;
  if (!(run.choice.x > 0.0 && run.choice.x <= kTruncationCap)) {
    throw DomainError("x_max must be in (0, 12]");
  }
  run.trace = std::make_shared<const Trace>(integrate(p, initial_state(), run.choice.x, opt));
  run.stats = run.trace->stats();
  run.quadrature = extract_by_quadrature(*run.trace, tol, true);
  run.matching = extract_by_matching(*run.trace, tol);
  return run;
}

std::vector<ContinuityRow> continuity_scan(double alpha, const std::vector<double>& c_grid, double tol,
                                           double budget) {
  for (double c : c_grid) {
    if (!(c >= 0.005 && c <= 10.0)) {
      throw DomainError("continuity_scan: c must lie in [0.005, 10]");
    }
  }
  std::vector<ContinuityRow> rows;
  for (double c : c_grid) {
    ContinuityRow row;
    row.c = c;
    const ConstantsRun run = compute_constants(make_params(c, alpha), tol, 0.0, budget);
    row.lc = run.matching;
    row.flagged = run.choice.degraded || run.matching.degraded;
    if (!rows.empty()) {
      for (int j = 0; j < 3; ++j) {
        row.max_step_from_previous = std::max(row.max_step_from_previous, std::abs(row.lc.B[j] - rows.back().lc.B[j]));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace llgss
