#include "llgss/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "llgss/errors.hpp"
#include "llgss/selfsimilar.hpp"

namespace llgss {

namespace {

CheckResult from_bound(const BoundReport& r) {
  CheckResult c;
  c.name = r.name;
  c.pass = r.pass;
  c.max_ratio = r.max_ratio;
  c.note = r.note;
  return c;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

void shrinker_checks(const ConstantsRun& run, const CircleGeom& geom, std::uint64_t seed,
                     std::vector<CheckResult>& out) {
  const Params& p = run.trace->params();
  const ShrinkerSolution sol(run.trace, 0.0);
  const double X = run.trace->x_max();
  const double floor = 2.0 * run.matching.err_est + 2.0 * run.stats.max_defect;

  {
    CheckResult c{"blowup_rate_origin", true, 0.0, ""};
    for (double tau : {1.0, 1e-2, 1e-4}) {
      const double rel = std::abs(grad_magnitude(sol, 0.0, -tau) * std::sqrt(tau) / p.c - 1.0);
      c.max_ratio = std::max(c.max_ratio, rel / 1e-12);
    }
    c.pass = c.max_ratio <= 1.0;
    out.push_back(c);
  }
  {
    CheckResult c{"blowup_log_slope", true, 0.0, ""};
    const BlowupFit f = blowup_regression(p, 1.0, {1e-2, 3e-3, 1e-3, 3e-4, 1e-4});
    c.max_ratio = f.relative / 0.01;
    c.pass = c.max_ratio <= 1.0;
    out.push_back(c);
  }
  {
    CheckResult c{"grad_finite_difference", true, 0.0, ""};
    for (auto [x, tau] : {std::pair{0.0, 1.0}, {0.5, 1.0}, {1.0, 0.5}, {-1.5, 0.2}, {1.0, 0.05}}) {
      if (std::abs(x) / std::sqrt(tau) > 0.9 * X) {
        continue;
      }
      c.max_ratio = std::max(c.max_ratio, grad_fd_check(sol, x, -tau).relative / 1e-4);
    }
    c.pass = c.max_ratio <= 1.0;
    out.push_back(c);
  }
  {
    CheckResult c{"scaling_identity", true, 0.0, ""};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lam(0.5, 2.0);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    std::uniform_real_distribution<double> taus(0.05, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double l = lam(rng);
      const double x = xs(rng);
      const double tau = std::max(taus(rng), 1.01 * x * x / (X * X));
      const Vec3 a = eval(sol, x, -tau);
      const Vec3 b = eval(sol, l * x, -l * l * tau);
      worst = std::max(worst, max_abs_diff(a, b));
    }
    c.max_ratio = worst / 1e-9;
    c.pass = c.max_ratio <= 1.0;
    out.push_back(c);
  }
  for (double x : {1.0, -1.0}) {
    std::vector<double> ts;
    for (double tau : {1.0, 0.1, 0.05, 0.02, 0.01}) {
      if (x * x / tau <= X * X) {
        ts.push_back(-tau);
      }
    }
    ts.push_back(-1.0001 * x * x / (X * X));
    const ConvergenceScan s = circle_convergence_scan(sol, run.matching, geom, x, ts);
    CheckResult c{x > 0 ? "circle_convergence_pos" : "circle_convergence_neg", true, 0.0, ""};
    const ConvergenceRow& last = s.rows.back();
    const double target = 1e-4 + floor;
    c.max_ratio = std::max({last.dist / target, last.defect / target, s.max_defect_ratio / 10.0});
    c.pass = c.max_ratio <= 1.0;
    c.note = "last xi " + fmt(last.xi) + ", dist " + fmt(last.dist) + ", defect " + fmt(last.defect);
    out.push_back(c);
  }
  {
    // Bump of radius 3 through the origin; its far part is bounded, not sampled.
    const TestFunction fn = make_bump(0.0, 3.0, {1.0, 0.0, 0.0});
    const double l1 = l1_norm(fn);
    const auto w = weak_limit_scan(sol, run.matching, fn, {-1e-1, -1e-2, -1e-3, -1e-4});
    CheckResult c{"weak_limit", true, 0.0, ""};
    for (std::size_t i = 1; i < w.size(); ++i) {
      const double now = std::abs(w[i].value) + w[i].tail_bound;
      c.max_ratio = std::max(c.max_ratio, now / std::abs(w[i - 1].value));
    }
    const double last = std::abs(w.back().value) + w.back().tail_bound;
    c.max_ratio = std::max(c.max_ratio, last / (0.05 * l1));
    c.pass = c.max_ratio < 1.0;
    c.note = "|int m.phi| " + fmt(std::abs(w.front().value)) + " -> " + fmt(std::abs(w.back().value)) + ", ||phi||_1 " + fmt(l1);
    out.push_back(c);
  }
}

}  // namespace

std::vector<CheckResult> bound_checks(const Trace& trace, const LimitConstants& lc, const CircleGeom& geom,
                                      double grid_spacing, bool oscillatory) {
  const Params& p = trace.params();
  const std::vector<double> grid = make_grid(1.0, trace.x_max(), grid_spacing);
  std::vector<CheckResult> out;
  out.push_back(from_bound(sweep_m(trace, lc, grid)));
  out.push_back(from_bound(sweep_mprime(trace, lc, grid)));
  out.push_back(from_bound(sweep_b(trace, lc, grid)));
  out.push_back(from_bound(sweep_w(trace, lc, grid)));
  out.push_back(from_bound(sweep_est_b(trace, lc, grid)));
  out.push_back(from_bound(sweep_est_w(trace, lc, grid)));
  out.push_back(from_bound(sweep_corfacil(trace, lc, grid)));
  std::vector<double> both = grid;
  for (double x : grid) {
    both.push_back(-x);
  }
  out.push_back(from_bound(dist_bound_check(trace, lc, geom, both)));
  if (oscillatory) {
    out.push_back(from_bound(sweep_osc1(p, grid)));
    CheckResult w0 = from_bound(sweep_osc2(p, 0.0, grid));
    w0.name += "_gamma_0";
    out.push_back(w0);
    CheckResult w1 = from_bound(sweep_osc2(p, 0.25 * p.alpha, grid));
    w1.name += "_gamma_alpha_4";
    out.push_back(w1);
  }
  if (p.beta > 0.0) {
    CheckResult c{"b_decay_rate", true, 0.0, ""};
    try {
      const DecayFit f = decay_regression(trace, lc, make_grid(3.0, trace.x_max(), 0.05));
      c.max_ratio = std::abs(f.slope + 1.0) / 0.15;
      c.pass = c.max_ratio <= 1.0;
      c.note = "slope " + fmt(f.slope) + " over " + std::to_string(f.points) + " points";
    } catch (const NumericalError& e) {
      c.pass = false;
      c.note = e.what();
    }
    out.push_back(c);
  }
  return out;
}

VerifyReport verify_all(const Params& p, const VerifyOptions& opt) {
  VerifyReport r;
  r.params = p;
  const ConstantsRun run = compute_constants(p, opt.tol, opt.x_max, opt.budget);
  const Trace& trace = *run.trace;
  r.x_max = trace.x_max();
  r.constants = run.matching;
  r.geometry = build_geometry(run.matching);

  const IdentityReport id = identity_suite(run.matching);
  r.checks.push_back({"identities", id.pass, id.max_defect / id.threshold, ""});
  {
    // The trace's global error is not estimated; its local tolerance stands in.
    const double allowed = matching_error(p, r.x_max) + run.quadrature.err_est + run.stats.max_defect +
                           trace.tol();
    CheckResult c{"route_agreement", true, 0.0, ""};
    c.max_ratio = allowed > 0.0 ? run.matching.cross_check / allowed : 0.0;
    c.pass = run.matching.cross_check <= allowed;
    r.checks.push_back(c);
  }
  {
    CheckResult c{"orthonormality", true, run.stats.max_defect / 1e-6, ""};
    c.pass = run.stats.max_defect < 1e-6;
    r.checks.push_back(c);
  }
  for (CheckResult& c : bound_checks(trace, run.matching, r.geometry, opt.grid_spacing, opt.oscillatory)) {
    r.checks.push_back(std::move(c));
  }
  {
    const AngleBound a = angle_bound_check(p, run.matching);
    CheckResult c{"angle_bound", true, 0.0, ""};
    if (a.applicable) {
      c.max_ratio = a.bound > 0.0 ? a.B1_sq / a.bound : 0.0;
      c.pass = a.pass && a.angle_pass;
      c.note = "B1^2 " + fmt(a.B1_sq) + " <= " + fmt(a.bound);
    } else {
      c.note = "not applicable: c < " + fmt(a.c_threshold);
    }
    r.checks.push_back(c);
  }
  if (opt.shrinker) {
    shrinker_checks(run, r.geometry, opt.seed, r.checks);
  }
  for (const CheckResult& c : r.checks) {
    r.pass = r.pass && c.pass;
  }
  return r;
}

}  // namespace llgss
