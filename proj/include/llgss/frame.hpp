#pragma once

// Augmented Serret-Frenet integration: the frame (m, n, b), the reduced phase
// psi = c Phi_alpha mod 2 pi, and the accumulators for the limit integrals,
// advanced together as one 19-dimensional system.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "llgss/ode.hpp"
#include "llgss/params.hpp"
#include "llgss/vec.hpp"

namespace llgss {

struct Frame {
  double x = 0.0;
  Vec3 m{1.0, 0.0, 0.0};
  Vec3 n{0.0, 1.0, 0.0};
  Vec3 b{0.0, 0.0, 1.0};
};

struct AugmentedState {
  Frame frame;
  double psi = 0.0;  ///< reduced phase in [0, 2 pi)
  Vec3 iB{};         ///< int_0^x (1 - alpha s^2/2) e^{-alpha s^2/4} m ds
  CVec3 iW{};        ///< int_0^x e^{i psi - alpha s^2/4} [(beta s^2/2) n + (1 - alpha s^2/2) b] ds
};

inline constexpr std::size_t kStateDim = 19;
using StateVector = ode::State<kStateDim>;

StateVector pack(const AugmentedState& s);
AugmentedState unpack(double x, const StateVector& y);

/// x = 0, m = e1, n = e2, b = e3, psi = 0, accumulators zero.
AugmentedState initial_state();

/// Frobenius norm of Gram(m, n, b) - I.
double orthonormality_defect(const Frame& f);

/// Largest |m_j^2 + n_j^2 + b_j^2 - 1| over j.
double component_identity_defect(const Frame& f);

/// Parity map sending the solution value at x to the value at -x.
Frame reflect(const Frame& f);
AugmentedState reflect(const AugmentedState& s);

/// Right-hand side of the augmented system.
void frame_rhs(const Params& p, double x, const StateVector& y, StateVector& dy);

struct FrameRhs {
  Params p;
  void operator()(double x, const StateVector& y, StateVector& dy) const { frame_rhs(p, x, y, dy); }
};

using FrameDriver = ode::Driver<kStateDim, FrameRhs>;

/// Upper bound on the step size that resolves the local rotation rate.
double frequency_guard(const Params& p, double x);

/// Projected right-hand-side evaluations for [0, x_max] under the frequency guard.
double projected_rhs_evals(const Params& p, double x_max);

inline constexpr double kDefaultBudget = 5e8;
inline constexpr double kDefectAbort = 1e-6;

struct IntegrateOptions {
  double tol = 1e-10;
  double budget = kDefaultBudget;
  bool reorthonormalize = false;        ///< Gram-Schmidt every 1000 accepted steps
  std::size_t max_checkpoints = 65536;  ///< memory cap; replay cost grows as it shrinks
};

struct TraceStats {
  std::uint64_t steps = 0;
  std::uint64_t rejected = 0;
  std::uint64_t rhs_evals = 0;
  double max_defect = 0.0;
  std::int64_t winding = 0;  ///< full turns removed from psi
};

/// Immutable record of one integration. States between checkpoints are
/// reconstructed by deterministic replay plus dense output.
class Trace {
 public:
  const Params& params() const { return params_; }
  double tol() const { return options_.tol; }
  const IntegrateOptions& options() const { return options_; }
  double x_start() const { return x_start_; }
  double x_end() const { return x_end_; }
  /// Positive end of a trace started at 0 (the usual case).
  double x_max() const { return x_end_; }
  const TraceStats& stats() const { return stats_; }
  const AugmentedState& initial() const { return initial_; }
  const AugmentedState& final_state() const { return final_; }
  std::size_t checkpoint_count() const { return checkpoints_.size(); }
  /// States stored at checkpoints, in integration order.
  std::vector<AugmentedState> samples() const;

 private:
  friend Trace integrate(const Params&, const AugmentedState&, double, const IntegrateOptions&);
  friend class TraceCursor;

  Params params_;
  IntegrateOptions options_;
  double x_start_ = 0.0;
  double x_end_ = 0.0;
  std::uint64_t stride_ = 1;
  std::vector<FrameDriver::Snapshot> checkpoints_;
  AugmentedState initial_;
  AugmentedState final_;
  TraceStats stats_;
};

/// Integrates from the canonical initial state over [0, x_max].
/// Requires 0 < x_max <= 12 and tol in [1e-13, 1e-6].
Trace integrate(const Params& p, double x_max, double tol = 1e-10);

/// General form: any start state and direction. Throws NumericalError when the
/// projected or actual cost exceeds the budget, or the frame drifts.
Trace integrate(const Params& p, const AugmentedState& start, double x_end, const IntegrateOptions& opt);

/// Sequential evaluator. Monotone queries replay each step once; a query
/// behind the current step restarts from the nearest checkpoint.
class TraceCursor {
 public:
  explicit TraceCursor(const Trace& trace);
  ~TraceCursor();
  TraceCursor(TraceCursor&&) noexcept;
  TraceCursor& operator=(TraceCursor&&) noexcept;

  AugmentedState at(double x);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Interpolated state at x within the trace range.
AugmentedState frame_at(const Trace& trace, double x);

/// Like frame_at for a trace starting at 0, extended to negative x by parity.
AugmentedState frame_at_signed(const Trace& trace, double x);

/// Central-difference residual of alpha f'' + alpha |f'|^2 f + beta (f x f')' - x f'/2
/// for f = m (negative abscissae via parity).
Vec3 profile_residual(const Trace& trace, double x, double h);

/// |m'(x)| - c e^{alpha x^2/4} with m' = k n, i.e. k (|n| - 1).
double gradient_magnitude_check(const Trace& trace, double x);

struct GjResidual {
  Complex residual;
  double relative = 0.0;  ///< |residual| over the largest of the three terms
  Complex g;              ///< g_j(x)
  double min_denominator = 0.0;
};

/// Residual of g'' - (x/2)(alpha + i beta) g' + (c^2/4) e^{alpha x^2/2} g for
/// g_j = exp(1/2 int_0^x k (n_j + i b_j)/(1 + m_j)). j is 0-based; x <= 6.
GjResidual gj_residual(const Trace& trace, int j, double x, double h);

/// Closed-form frame for alpha = 1.
Frame explicit_alpha1(double c, double x);

/// Closed-form frame for the c = 0 limit.
Frame explicit_c0(double alpha, double x);

/// Rows x, m, n, b, psi at x = x_start, x_start + spacing, ..., plus the endpoint.
void write_trace_csv(std::ostream& os, const Trace& trace, double spacing);

/// Same rows as 11 little-endian float64 values each, no header.
void write_trace_binary(std::ostream& os, const Trace& trace, double spacing);

}  // namespace llgss
