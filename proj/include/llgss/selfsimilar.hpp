#pragma once

// The space-time shrinker m(x, t) = m_profile(x / sqrt(T - t)) built from a
// profile trace, its blow-up rate, the pointwise approach to the limit
// circles and the weak vanishing limit as t -> T.

#include <functional>
#include <memory>
#include <vector>

#include "llgss/circles.hpp"

namespace llgss {

class ShrinkerSolution {
 public:
  /// The trace must start at 0; negative similarity variables use parity.
  explicit ShrinkerSolution(Trace trace, double T = 0.0);
  explicit ShrinkerSolution(std::shared_ptr<const Trace> trace, double T = 0.0);

  const Params& params() const { return trace_->params(); }
  double T() const { return T_; }
  const Trace& trace() const { return *trace_; }

 private:
  std::shared_ptr<const Trace> trace_;
  double T_;
};

/// x / sqrt(T - t); throws DomainError unless t < T.
double similarity_variable(double x, double t, double T);

/// m(x, t). Throws RangeError carrying the x_max the query needs when the
/// similarity variable leaves the trace.
Vec3 eval(const ShrinkerSolution& sol, double x, double t);

/// (c / sqrt(T - t)) e^{alpha x^2 / (4 (T - t))}.
double grad_magnitude(const Params& p, double x, double t, double T);
double grad_magnitude(const ShrinkerSolution& sol, double x, double t);
/// Its logarithm, finite where the value itself overflows.
double log_grad_magnitude(const Params& p, double x, double t, double T);

struct GradCheck {
  double closed = 0.0;
  double finite_difference = 0.0;
  double relative = 0.0;
};

/// Closed form against a centered difference of eval, with the step a small
/// fraction of the local oscillation length.
GradCheck grad_fd_check(const ShrinkerSolution& sol, double x, double t);

struct BlowupFit {
  double slope = 0.0;     ///< d log|dm/dx| / d(1/(T - t)) by least squares
  double expected = 0.0;  ///< alpha / 4
  double relative = 0.0;
};

/// Regression of log grad_magnitude(x, t) on 1/(T - t) over the given T - t values.
BlowupFit blowup_regression(const Params& p, double x, const std::vector<double>& tau_grid);

struct ConvergenceRow {
  double t = 0.0;
  double xi = 0.0;
  double dist = 0.0;            ///< to C+ for x > 0, C- for x < 0
  double dist_envelope = 0.0;
  double defect = 0.0;          ///< max_j |m_j - rho_j cos(c Phi(|xi|) - phi_j)|, rho- for x < 0
  double defect_envelope = 0.0; ///< (10 beta / (c alpha^2)) |xi| e^{-alpha xi^2/4}
};

struct ConvergenceScan {
  std::vector<ConvergenceRow> rows;
  bool range_limited = false;  ///< later t values needed a longer trace
  double max_usable_t = 0.0;   ///< last t evaluated
  double required_x_max = 0.0; ///< set when range_limited
  bool dist_decreasing = true;
  bool defect_decreasing = true;
  double max_defect_ratio = 0.0;
};

/// Requires x != 0 and an increasing t_grid.
ConvergenceScan circle_convergence_scan(const ShrinkerSolution& sol, const LimitConstants& lc,
                                        const CircleGeom& geom, double x, const std::vector<double>& t_grid);

/// Bounded Lipschitz test function R -> R^3 supported in [lo, hi].
struct TestFunction {
  std::function<Vec3(double)> f;
  double lo = 0.0;
  double hi = 0.0;
  double sup = 0.0;  ///< sup |f|
  double lip = 0.0;  ///< Lipschitz constant of f
};

/// v exp(1 - 1/(1 - ((x - center)/radius)^2)) on |x - center| < radius.
TestFunction make_bump(double center, double radius, const Vec3& v);

/// int |f(x)| dx over the support.
double l1_norm(const TestFunction& fn);

struct WeakLimitPoint {
  double t = 0.0;
  double tau = 0.0;           ///< T - t
  double value = 0.0;         ///< window integral of m . f
  double tail_bound = 0.0;    ///< bound on the part of the support beyond the trace
  double window = 0.0;        ///< |x| covered by the trace, x_max sqrt(tau)
  std::size_t panels = 0;
};

/// int m(x, t) . f(x) dx for each t. Inside |x| <= x_max sqrt(T - t) by
/// quadrature on panels shorter than the local oscillation length; outside,
/// bounded through the oscillatory expansion of m (integration by parts
/// against the phase plus the remainder envelope). Throws NumericalError
/// when more than max_panels panels would be needed.
std::vector<WeakLimitPoint> weak_limit_scan(const ShrinkerSolution& sol, const LimitConstants& lc,
                                            const TestFunction& fn, const std::vector<double>& t_grid,
                                            double max_panels = 5e6);

/// int_R e^{-alpha x^2 / (4 t)} dx and int_R |x| e^{-alpha x^2 / (4 t)} dx by quadrature.
double gaussian_integral(double alpha, double t);
double gaussian_abs_moment(double alpha, double t);

}  // namespace llgss
