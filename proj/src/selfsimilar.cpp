#include "llgss/selfsimilar.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "llgss/asymptotics.hpp"
#include "llgss/errors.hpp"

namespace llgss {

namespace {

using Rule = boost::math::quadrature::gauss<double, 8>;

// Gauss nodes on [-1, 1] in increasing order with their weights.
const std::vector<std::pair<double, double>>& sorted_rule() {
  static const std::vector<std::pair<double, double>> rule = [] {
    std::vector<std::pair<double, double>> r;
    const auto& xs = Rule::abscissa();
    const auto& ws = Rule::weights();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      r.emplace_back(xs[i], ws[i]);
      if (xs[i] != 0.0) {
        r.emplace_back(-xs[i], ws[i]);
      }
    }
    std::sort(r.begin(), r.end());
    return r;
  }();
  return rule;
}

double curvature(const Params& p, double xi) { return p.c * std::exp(0.25 * p.alpha * xi * xi); }

// int over u in [ua, ub] (0 <= ua < ub <= x_max) of g(u, m(u), psi(u)) with
// panels shorter than the local oscillation length and max_width.
template <class G>
double oscillation_quadrature(const Trace& trace, double ua, double ub, double max_width, std::size_t& panels,
                              G&& g) {
  const Params& p = trace.params();
  TraceCursor cur(trace);
  double sum = 0.0;
  double a = ua;
  while (a < ub) {
    // k grows with u, so its value at the far end of a trial panel governs.
    double w = std::min(max_width, ub - a);
    while (w * (1.0 + curvature(p, a + w)) > 0.5) {
      w *= 0.5;
    }
    const double mid = a + 0.5 * w;
    for (const auto& [node, weight] : sorted_rule()) {
      const double u = mid + 0.5 * w * node;
      const AugmentedState s = cur.at(u);
      sum += 0.5 * w * weight * g(u, s);
    }
    a += w;
    ++panels;
  }
  return sum;
}

}  // namespace

ShrinkerSolution::ShrinkerSolution(Trace trace, double T)
    : ShrinkerSolution(std::make_shared<const Trace>(std::move(trace)), T) {}

ShrinkerSolution::ShrinkerSolution(std::shared_ptr<const Trace> trace, double T) : trace_(std::move(trace)), T_(T) {
  if (!trace_ || trace_->x_start() != 0.0 || trace_->x_end() <= 0.0) {
    throw DomainError("shrinker profile trace must run from 0 to a positive x_max");
  }
  if (!std::isfinite(T)) {
    throw DomainError("T must be finite");
  }
}

double similarity_variable(double x, double t, double T) {
  if (!(t < T)) {
    throw DomainError("evaluation requires t < T");
  }
  return x / std::sqrt(T - t);
}

Vec3 eval(const ShrinkerSolution& sol, double x, double t) {
  const double xi = similarity_variable(x, t, sol.T());
  if (std::abs(xi) > sol.trace().x_max()) {
    std::ostringstream os;
    os << "similarity variable " << xi << " outside the trace; x_max >= " << std::abs(xi) << " required";
    throw RangeError(os.str(), std::abs(xi));
  }
  return frame_at_signed(sol.trace(), xi).frame.m;
}

double grad_magnitude(const Params& p, double x, double t, double T) {
  if (!(t < T)) {
    throw DomainError("evaluation requires t < T");
  }
  const double tau = T - t;
  return p.c / std::sqrt(tau) * std::exp(p.alpha * x * x / (4.0 * tau));
}

double log_grad_magnitude(const Params& p, double x, double t, double T) {
  if (!(t < T)) {
    throw DomainError("evaluation requires t < T");
  }
  const double tau = T - t;
  return std::log(p.c) - 0.5 * std::log(tau) + p.alpha * x * x / (4.0 * tau);
}

double grad_magnitude(const ShrinkerSolution& sol, double x, double t) {
  return grad_magnitude(sol.params(), x, t, sol.T());
}

GradCheck grad_fd_check(const ShrinkerSolution& sol, double x, double t) {
  const double xi = similarity_variable(x, t, sol.T());
  const double sq = std::sqrt(sol.T() - t);
  const double h = 1e-2 / (1.0 + curvature(sol.params(), std::abs(xi))) * sq;
  GradCheck g;
  g.closed = grad_magnitude(sol, x, t);
  const Vec3 d = eval(sol, x + h, t) - eval(sol, x - h, t);
  g.finite_difference = norm(d) / (2.0 * h);
  g.relative = std::abs(g.finite_difference - g.closed) / g.closed;
  return g;
}

BlowupFit blowup_regression(const Params& p, double x, const std::vector<double>& tau_grid) {
  if (tau_grid.size() < 2) {
    throw DomainError("blowup_regression needs at least two points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double tau : tau_grid) {
    const double u = 1.0 / tau;
    const double v = log_grad_magnitude(p, x, -tau, 0.0);
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  const double n = static_cast<double>(tau_grid.size());
  BlowupFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.expected = 0.25 * p.alpha;
  f.relative = std::abs(f.slope - f.expected) / f.expected;
  return f;
}

ConvergenceScan circle_convergence_scan(const ShrinkerSolution& sol, const LimitConstants& lc,
                                        const CircleGeom& geom, double x, const std::vector<double>& t_grid) {
  if (x == 0.0) {
    throw DomainError("circle convergence needs x != 0");
  }
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw DomainError("t_grid must be increasing");
  }
  const Params& p = sol.params();
  const bool neg = x < 0.0;
  const Vec3& normal = neg ? geom.B_minus : geom.B_plus;
  const Vec3 rho = neg ? Vec3{lc.rho[0], -lc.rho[1], -lc.rho[2]} : lc.rho;
  ConvergenceScan s;
  TraceCursor cur(sol.trace());
  for (double t : t_grid) {
    const double xi = similarity_variable(x, t, sol.T());
    const double u = std::abs(xi);
    if (u > sol.trace().x_max()) {
      s.range_limited = true;
      s.required_x_max = u;
      break;
    }
    const AugmentedState st = cur.at(u);
    const Vec3 m = neg ? reflect(st.frame).m : st.frame.m;
    ConvergenceRow r;
    r.t = t;
    r.xi = xi;
    r.dist = dist_to_circle(m, normal);
    r.dist_envelope = dist_envelope(p, u);
    for (int j = 0; j < 3; ++j) {
      r.defect = std::max(r.defect, std::abs(m[j] - rho[j] * std::cos(st.psi - lc.phi[j])));
    }
    r.defect_envelope = u >= 1.0 ? est_w_envelope(p, u) : 0.0;
    if (r.defect_envelope > 0.0) {
      s.max_defect_ratio = std::max(s.max_defect_ratio, r.defect / r.defect_envelope);
    }
    if (!s.rows.empty()) {
      s.dist_decreasing = s.dist_decreasing && r.dist <= s.rows.back().dist;
      s.defect_decreasing = s.defect_decreasing && r.defect <= s.rows.back().defect;
    }
    s.max_usable_t = t;
    s.rows.push_back(r);
  }
  return s;
}

TestFunction make_bump(double center, double radius, const Vec3& v) {
  if (!(radius > 0.0)) {
    throw DomainError("bump radius must be positive");
  }
  auto eta = [](double u) { return u * u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0; };
  // |eta'(u)| = 2u/(1-u^2)^2 eta(u) is unimodal on (0, 1).
  auto neg_slope = [&eta](double u) { return -2.0 * u / ((1.0 - u * u) * (1.0 - u * u)) * eta(u); };
  const auto best = boost::math::tools::brent_find_minima(neg_slope, 0.0, 1.0 - 1e-9, 50);
  const double vn = norm(v);
  TestFunction fn;
  fn.lo = center - radius;
  fn.hi = center + radius;
  fn.sup = vn;
  fn.lip = -best.second * (1.0 + 1e-6) * vn / radius;
  fn.f = [center, radius, v, eta](double x) {
    const double e = eta((x - center) / radius);
    return Vec3{e * v[0], e * v[1], e * v[2]};
  };
  return fn;
}

double l1_norm(const TestFunction& fn) {
  const int panels = 2000;
  const double w = (fn.hi - fn.lo) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double mid = fn.lo + (i + 0.5) * w;
    for (const auto& [node, weight] : sorted_rule()) {
      sum += 0.5 * w * weight * norm(fn.f(mid + 0.5 * w * node));
    }
  }
  return sum;
}

std::vector<WeakLimitPoint> weak_limit_scan(const ShrinkerSolution& sol, const LimitConstants& lc,
                                            const TestFunction& fn, const std::vector<double>& t_grid,
                                            double max_panels) {
  const Params& p = sol.params();
  const Trace& trace = sol.trace();
  const double X = trace.x_max();
  std::vector<WeakLimitPoint> out;
  for (double t : t_grid) {
    WeakLimitPoint w;
    w.t = t;
    w.tau = sol.T() - t;
    if (!(w.tau > 0.0)) {
      throw DomainError("weak limit requires t < T");
    }
    const double sq = std::sqrt(w.tau);
    w.window = X * sq;
    // Both halves in u = |x| / sqrt(tau), u in [0, X].
    struct Side {
      double ua, ub;   // window part
      double outside;  // length of the support beyond the window
      bool neg;
    };
    std::vector<Side> sides;
    if (fn.hi > 0.0) {
      const double a = std::max(fn.lo, 0.0);
      sides.push_back({std::min(a, w.window) / sq, std::min(fn.hi, w.window) / sq,
                       std::max(0.0, fn.hi - std::max(a, w.window)), false});
    }
    if (fn.lo < 0.0) {
      const double a = std::max(-fn.hi, 0.0);
      sides.push_back({std::min(a, w.window) / sq, std::min(-fn.lo, w.window) / sq,
                       std::max(0.0, -fn.lo - std::max(a, w.window)), true});
    }
    double projected = 0.0;
    for (const Side& s : sides) {
      projected += 2.0 * ((s.ub - s.ua) + p.c * (phi(p.alpha, s.ub) - phi(p.alpha, s.ua))) / 0.5 +
                   (s.ub - s.ua) / (1e-3 * (fn.hi - fn.lo) / sq);
    }
    if (projected > max_panels) {
      throw NumericalError("weak limit: oscillation not resolvable within the panel budget");
    }
    const double max_width = 1e-3 * (fn.hi - fn.lo) / sq;
    const double rho_sum = lc.rho[0] + lc.rho[1] + lc.rho[2];
    for (const Side& s : sides) {
      if (s.ub > s.ua) {
        w.value += sq * oscillation_quadrature(trace, s.ua, s.ub, max_width, w.panels,
                                               [&](double u, const AugmentedState& st) {
                                                 const double x = s.neg ? -u * sq : u * sq;
                                                 const Vec3 m = s.neg ? reflect(st.frame).m : st.frame.m;
                                                 return dot(m, fn.f(x));
                                               });
      }
      if (s.outside > 0.0) {
        // m = Re(conj(W) e^{i psi}) + R beyond X. The phase part integrates by
        // parts against theta' = (c / sqrt(tau)) e^{alpha X^2/4}; R is within
        // the remainder envelope in each component.
        const double theta_prime = p.c / sq * std::exp(0.25 * p.alpha * X * X);
        const double osc = rho_sum * (2.0 * fn.sup + fn.lip * s.outside) / theta_prime;
        const double rem = std::sqrt(3.0) * fn.sup * sq * 10.0 * p.beta / (p.c * p.alpha * p.alpha) *
                           (2.0 / p.alpha) * std::exp(-0.25 * p.alpha * X * X);
        w.tail_bound += osc + rem;
      }
    }
    out.push_back(w);
  }
  return out;
}

double gaussian_integral(double alpha, double t) {
  boost::math::quadrature::exp_sinh<double> q;
  const double a = alpha / (4.0 * t);
  return 2.0 * q.integrate([a](double x) { return std::exp(-a * x * x); });
}

double gaussian_abs_moment(double alpha, double t) {
  boost::math::quadrature::exp_sinh<double> q;
  const double a = alpha / (4.0 * t);
  return 2.0 * q.integrate([a](double x) { return x * std::exp(-a * x * x); });
}

}  // namespace llgss
