#pragma once

// Shrinker parameters, the phase primitive Phi_alpha and Gaussian-tail integrals.

namespace llgss {

/// Curvature amplitude c and Gilbert damping alpha, with the exchange
/// constant beta = sqrt(1 - alpha^2) derived once.
struct Params {
  double c = 0.0;
  double alpha = 1.0;
  double beta = 0.0;
};

/// Validates c > 0 and 0 < alpha <= 1 (both finite). Throws DomainError.
Params make_params(double c, double alpha);

/// Largest |x| accepted by phi(): beyond it e^{alpha x^2/4} leaves double range.
double phi_cap(double alpha);

/// Phi_alpha(x) = int_0^x exp(alpha s^2 / 4) ds, by adaptive Gauss-Kronrod quadrature.
double phi(double alpha, double x);

/// Three-term large-x expansion of Phi_alpha (Dawson-integral asymptotics).
/// Requires x >= 3 / sqrt(alpha).
double phi_asymptotic(double alpha, double x);

struct PhaseValue {
  double x = 0.0;
  double phi = 0.0;
  double psi = 0.0;  ///< c * phi reduced to [0, 2 pi)
};

PhaseValue phase_value(const Params& p, double x);

/// Reduces an angle to [0, 2 pi).
double reduce_angle(double theta);

/// Exact value of int_x^inf s^n exp(-gamma s^2) ds for n in {0,1,2,3}.
double gauss_tail(double gamma, int n, double x);

/// Closed-form upper bound for the same tail; valid for 0 < gamma <= 1 and
/// x > 0 (n = 0, 1) or x >= 1 (n = 2, 3).
double tail_bound(double gamma, int n, double x);

/// Lower bound x e^{-gamma x^2} / (2 gamma x^2 + 1) for the n = 0 tail.
double tail_lower_bound_n0(double gamma, double x);

/// Bound on the truncated tails of the limit-constant integrals beyond X:
/// (beta / 2c) (2/(alpha X) + 16 X / alpha^2) e^{-alpha X^2 / 4}.
double limit_integral_tail(const Params& p, double x);

inline constexpr double kTruncationFloor = 4.0;
inline constexpr double kTruncationCap = 12.0;

struct TruncationPoint {
  double x = kTruncationFloor;
  double tail = 0.0;
  bool degraded = false;  ///< tol not reachable below the cap
};

TruncationPoint truncation_point(const Params& p, double tol);

}  // namespace llgss
