// One PASS/FAIL line per acceptance criterion; nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "llgss/circles.hpp"
#include "llgss/constants.hpp"
#include "llgss/errors.hpp"
#include "llgss/frame.hpp"
#include "llgss/selfsimilar.hpp"
#include "llgss/verify.hpp"

using namespace llgss;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) {
    ++failures;
  }
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Cached {
  ConstantsRun run;
  double seconds = 0.0;
};

std::map<std::pair<double, double>, Cached> runs;

const Cached& constants_at(double c, double alpha, double tol = 1e-8) {
  auto key = std::make_pair(c, alpha);
  auto it = runs.find(key);
  if (it == runs.end()) {
    const auto t0 = Clock::now();
    Cached e{compute_constants(make_params(c, alpha), tol), 0.0};
    e.seconds = seconds_since(t0);
    it = runs.emplace(key, std::move(e)).first;
  }
  return it->second;
}

const std::vector<double> kGridC = {0.5, 1.0, 2.0};
const std::vector<double> kGridAlpha = {0.3, 0.5, 0.8, 1.0};

void ac1() {
  const Cached& e = constants_at(0.5, 0.5);
  const double B1 = e.run.matching.B[0];
  const bool pass = B1 >= -0.73 && B1 <= -0.71 && e.seconds < 120.0;
  report("AC1", pass, fmt("B1 = %.7f", B1) + fmt(", %.1f s", e.seconds));
}

void ac2() {
  const Cached& e = constants_at(0.5, 0.5);
  const CircleGeom g = build_geometry(e.run.matching);
  const Vec3 want{-0.72, -0.3, 0.63};
  const double gap = max_abs_diff(g.B_plus, want);
  const bool near_normals = std::abs(g.angle_normals - 1.5951) <= 0.01;
  const bool near_circles = std::abs(g.angle_circles - 1.5951) <= 0.01;
  const bool pass = gap <= 0.01 && (near_normals != near_circles);
  std::string d = fmt("B+ = (%.5f, ", g.B_plus[0]) + fmt("%.5f, ", g.B_plus[1]) + fmt("%.5f)", g.B_plus[2]);
  d += fmt(", angle_normals %.6f", g.angle_normals) + fmt(", angle_circles %.6f", g.angle_circles);
  d += near_normals ? ", matching convention: normals" : (near_circles ? ", matching convention: circles" : "");
  report("AC2", pass, d);
}

void ac3() {
  const auto t0 = Clock::now();
  const Params p = make_params(0.01, 0.5);
  double x_max = choose_x_max(p, 1e-8).x;
  if (x_max < 11.0) {
    x_max = 11.0;
  }
  const ConstantsRun r = compute_constants(p, 1e-8, x_max);
  const double s = seconds_since(t0);
  const double B1 = r.matching.B[0];
  const bool pass = std::abs(B1 + 0.996417) <= 2e-3 && r.trace->x_max() >= 11.0 && s < 300.0;
  report("AC3", pass, fmt("B1 = %.7f", B1) + fmt(", x_max %.3f", r.trace->x_max()) + fmt(", %.1f s", s));
}

void ac4() {
  double worst_a1 = 0.0;
  for (double c : {0.5, 1.0, 2.0}) {
    const Trace tr = integrate(make_params(c, 1.0), 6.0, 1e-12);
    TraceCursor cur(tr);
    for (double x = 0.0; x <= 6.0 + 1e-12; x += 0.01) {
      const Frame f = cur.at(x).frame;
      const Frame e = explicit_alpha1(c, x);
      worst_a1 = std::max({worst_a1, max_abs_diff(f.m, e.m), max_abs_diff(f.n, e.n), max_abs_diff(f.b, e.b)});
    }
  }
  double worst_c0 = 0.0;
  for (double alpha : {0.3, 0.5, 0.8}) {
    const Trace tr = integrate(make_params(1e-8, alpha), 3.0, 1e-12);
    TraceCursor cur(tr);
    for (double x = 0.0; x <= 3.0 + 1e-12; x += 0.01) {
      const Frame f = cur.at(x).frame;
      const Frame e = explicit_c0(alpha, x);
      worst_c0 = std::max({worst_c0, max_abs_diff(f.m, e.m), max_abs_diff(f.n, e.n), max_abs_diff(f.b, e.b)});
    }
  }
  report("AC4", worst_a1 <= 1e-9 && worst_c0 <= 1e-5,
         fmt("alpha = 1 max error %.2e", worst_a1) + fmt(", c = 1e-8 max error %.2e", worst_c0));
}

void ac5() {
  double worst = 0.0;
  std::string where;
  for (double c : kGridC) {
    for (double a : kGridAlpha) {
      const IdentityReport id = identity_suite(constants_at(c, a).run.matching);
      for (const IdentityCheck& k : id.checks) {
        if (k.defect > worst) {
          worst = k.defect;
          where = k.name + fmt(" at c = %g", c) + fmt(", alpha = %g", a);
        }
      }
    }
  }
  report("AC5", worst < 1e-6, fmt("max identity defect %.2e", worst) + " (" + where + ")");
}

void ac6() {
  int failed = 0;
  int total = 0;
  std::string first;
  double worst = 0.0;
  for (double c : kGridC) {
    for (double a : kGridAlpha) {
      const ConstantsRun& r = constants_at(c, a).run;
      const CircleGeom g = build_geometry(r.matching);
      for (const CheckResult& k : bound_checks(*r.trace, r.matching, g, 0.25, true)) {
        ++total;
        worst = std::max(worst, k.max_ratio);
        if (!k.pass) {
          ++failed;
          if (first.empty()) {
            first = ", first failure " + k.name + fmt(" at c = %g", c) + fmt(", alpha = %g", a);
          }
        }
      }
    }
  }
  report("AC6", failed == 0,
         std::to_string(total - failed) + "/" + std::to_string(total) + " envelope checks hold" +
             fmt(", max defect/envelope %.3g", worst) + first);
}

void ac7() {
  const std::vector<std::pair<double, double>> pts = {{2.5, 0.5}, {3.0, 0.5}, {5.0, 0.5}, {2.0, 0.8}, {4.0, 0.8}};
  bool pass = true;
  std::string d;
  for (auto [c, a] : pts) {
    const Params p = make_params(c, a);
    const AngleBound ab = angle_bound_check(p, constants_at(c, a).run.matching);
    pass = pass && ab.applicable && ab.pass;
    d += fmt("%g/", c) + fmt("%g: ", a) + fmt("%.3g <= ", ab.B1_sq) + fmt("%.3g; ", ab.bound);
  }
  report("AC7", pass, "B1^2 <= pi beta^2/(c^2 alpha): " + d);
}

void ac8() {
  const ConstantsRun& r = constants_at(0.5, 0.5).run;
  const ShrinkerSolution sol(r.trace, 0.0);
  double worst = 0.0;
  for (double tau : {1.0, 1e-2, 1e-4}) {
    const double want = r.trace->params().c / std::sqrt(tau);
    worst = std::max(worst, std::abs(grad_magnitude(sol, 0.0, -tau) - want) / want);
  }
  report("AC8", worst <= 1e-12, fmt("max relative error %.2e", worst));
}

void ac9() {
  const ConstantsRun& r = constants_at(0.5, 0.5).run;
  const ShrinkerSolution sol(r.trace, 0.0);
  const TestFunction fn = make_bump(0.0, 3.0, {1.0, 0.0, 0.0});
  const double l1 = l1_norm(fn);
  const auto w = weak_limit_scan(sol, r.matching, fn, {-1e-1, -1e-3});
  const double early = std::abs(w[0].value) - w[0].tail_bound;
  const double late = std::abs(w[1].value) + w[1].tail_bound;
  const bool pass = late < 0.05 * l1 && late < early;
  report("AC9", pass,
         fmt("|int m.phi| %.4g at T-t = 1e-1, ", std::abs(w[0].value)) +
             fmt("%.4g at 1e-3", std::abs(w[1].value)) + fmt(" (tail bound %.1e)", w[1].tail_bound) +
             fmt(", 0.05 ||phi||_1 = %.4g", 0.05 * l1));
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  double q[4];
  double s = 0.0;
  for (double& v : q) {
    v = g(rng);
    s += v * v;
  }
  s = std::sqrt(s);
  const double w = q[0] / s, x = q[1] / s, y = q[2] / s, z = q[3] / s;
  return Mat3{Vec3{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
              Vec3{2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
              Vec3{2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};
}

double frame_gap(const Frame& a, const Frame& b) {
  return std::max({max_abs_diff(a.m, b.m), max_abs_diff(a.n, b.n), max_abs_diff(a.b, b.b)});
}

void ac10() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> cs(0.2, 2.0);
  std::uniform_real_distribution<double> as(0.3, 1.0);
  IntegrateOptions opt;
  opt.tol = 1e-10;

  // Rotation equivariance: rotating the initial frame rotates the whole frame.
  double rot = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Params p = make_params(cs(rng), as(rng));
    const Mat3 R = random_rotation(rng);
    AugmentedState s = initial_state();
    s.frame.m = R * s.frame.m;
    s.frame.n = R * s.frame.n;
    s.frame.b = R * s.frame.b;
    const Trace base = integrate(p, initial_state(), 5.0, opt);
    const Trace turned = integrate(p, s, 5.0, opt);
    TraceCursor cb(base);
    TraceCursor ct(turned);
    for (double x = 0.0; x <= 5.0 + 1e-12; x += 0.05) {
      const Frame f = cb.at(x).frame;
      const Frame g = ct.at(x).frame;
      rot = std::max(rot, frame_gap({x, R * f.m, R * f.n, R * f.b}, g));
    }
  }
  // Parity: integrating backwards from 0 reproduces the reflected forward frame.
  double par = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Params p = make_params(cs(rng), as(rng));
    const Trace fwd = integrate(p, initial_state(), 5.0, opt);
    const Trace bwd = integrate(p, initial_state(), -5.0, opt);
    TraceCursor cf(fwd);
    TraceCursor cb(bwd);
    for (double x = 0.0; x <= 5.0 + 1e-12; x += 0.05) {
      par = std::max(par, frame_gap(reflect(cf.at(x).frame), cb.at(-x).frame));
    }
  }
  // Two tolerances: constants at 1e-8 and 1e-10 agree within both estimates.
  double two_ratio = 0.0;
  for (auto [c, a] : {std::pair{0.5, 0.5}, {1.0, 0.8}}) {
    const LimitConstants& lo = constants_at(c, a).run.matching;
    const ConstantsRun hi = compute_constants(make_params(c, a), 1e-10);
    double gap = max_abs_diff(lo.B, hi.matching.B);
    for (int j = 0; j < 3; ++j) {
      gap = std::max(gap, std::abs(lo.W[j] - hi.matching.W[j]));
    }
    const double allowed = lo.err_est + hi.matching.err_est + 1e-8 + 1e-10;
    two_ratio = std::max(two_ratio, gap / allowed);
  }
  // Orthonormality and route equivalence over the parameter grid.
  double defect = 0.0;
  double route_ratio = 0.0;
  for (double c : kGridC) {
    for (double a : kGridAlpha) {
      const ConstantsRun& r = constants_at(c, a).run;
      defect = std::max(defect, r.stats.max_defect);
      const double allowed = matching_error(r.trace->params(), r.trace->x_max()) + r.quadrature.err_est +
                             r.stats.max_defect + r.trace->tol();
      route_ratio = std::max(route_ratio, r.matching.cross_check / allowed);
    }
  }
  const double s = seconds_since(t0);
  const bool pass = rot <= 1e-8 && par <= 1e-8 && two_ratio <= 1.0 && defect < 1e-8 && route_ratio <= 1.0;
  report("AC10", pass,
         fmt("rotation %.2e", rot) + fmt(", parity %.2e", par) + fmt(", two-tolerance ratio %.3g", two_ratio) +
             fmt(", orthonormality %.2e", defect) + fmt(", route ratio %.3g", route_ratio) +
             fmt(", seed 12345, %.1f s", s));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::pair<const char*, void (*)()> all[] = {{"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
                                                      {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8},
                                                      {"AC9", ac9}, {"AC10", ac10}};
  for (auto [id, fn] : all) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, std::string("error: ") + e.what());
    }
  }
  std::printf("%d of 10 criteria failed, %.1f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
