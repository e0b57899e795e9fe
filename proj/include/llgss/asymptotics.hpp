#pragma once

// Large-x expansions of m, m', b, w in terms of the limit constants, the
// oscillatory tail integrals, and envelope sweeps against a trace.

#include <string>
#include <vector>

#include "llgss/constants.hpp"
#include "llgss/report.hpp"

namespace llgss {

/// Safety factor applied to envelopes whose constant is not quantified.
inline constexpr double kBigOFactor = 10.0;

struct Correction {
  std::string name;
  double value = 0.0;
};

struct AsymptoticEval {
  double x = 0.0;
  double leading = 0.0;
  std::vector<Correction> corrections;
  double remainder_bound = 0.0;

  double value() const {
    double v = leading;
    for (const auto& c : corrections) {
      v += c.value;
    }
    return v;
  }
};

struct VectorEval {
  double x = 0.0;
  Vec3 value{};
  double remainder_bound = 0.0;
};

struct ComplexVectorEval {
  double x = 0.0;
  CVec3 value{};
  double remainder_bound = 0.0;
};

/// The phase argument psi is c Phi_alpha(x) mod 2 pi, normally taken from a
/// trace state. j is 0-based. All require x >= 1.
AsymptoticEval m_asymptotic(const Params& p, const LimitConstants& lc, int j, double x, double psi);
AsymptoticEval mprime_asymptotic(const Params& p, const LimitConstants& lc, int j, double x, double psi);
VectorEval b_asymptotic(const Params& p, const LimitConstants& lc, double x, double psi);
ComplexVectorEval w_asymptotic(const Params& p, const LimitConstants& lc, double x, double psi);

/// Explicit envelopes, x >= 1.
double est_b_envelope(const Params& p, double x);     ///< (6 beta / (c alpha)) x e^{-alpha x^2/4}
double est_w_envelope(const Params& p, double x);     ///< (10 beta / (c alpha^2)) x e^{-alpha x^2/4}

struct OscIntegral {
  Complex value;
  double paper_bound = 0.0;
  double tail_bound = 0.0;  ///< bound on the part beyond x_cut left out of value
  double x_cut = 0.0;
};

/// int_x^inf s^n e^{i sigma Phi_alpha(s) - gamma s^2} ds for n in {0, 1, 2},
/// with 0 < gamma + alpha/4 <= 1 and x >= 1. paper_bound is the lemma right
/// hand side: 11 x e^{-alpha x^2/4} / (|sigma| alpha) for n = 1, gamma = 0;
/// otherwise e^{-g x^2}/|sigma|, x e^{-g x^2}/(|sigma| g), x^2 e^{-g x^2}/(|sigma| g)
/// for n = 0, 1, 2 with g = gamma + alpha/4. The integral is taken in its
/// integrated-by-parts form up to x_cut, chosen so the left-out tail is below
/// rel_tail * paper_bound unless max_evals runs out first.
OscIntegral osc_integral(double sigma, double alpha, double x, double gamma = 0.0, int n = 1,
                         double rel_tail = 1e-2, double max_evals = 5e7);

/// Same integral at every point of an increasing grid from one pass; x_cut is
/// chosen for the last point.
std::vector<OscIntegral> osc_integral_grid(double sigma, double alpha, const std::vector<double>& grid,
                                           double gamma = 0.0, int n = 1, double rel_tail = 1e-2,
                                           double max_evals = 5e7);

/// i (x/sigma) e^{i sigma Phi(x) - alpha x^2/4}, the leading term of the n = 1 tail.
Complex osc_leading(double sigma, double alpha, double x);

struct CorFacil {
  double x = 0.0;
  Vec3 R{};
  Vec3 R_tilde{};
  double bound = 0.0;
  bool pass = true;
};

/// R_j = m_j - rho_j cos(psi - phi_j), R~_j = n_j + rho_j sin(psi - phi_j).
CorFacil corfacil_check(const Trace& trace, const LimitConstants& lc, double x);

/// Regular grid x0, x0 + dx, ..., capped at x1.
std::vector<double> make_grid(double x0, double x1, double dx);

/// Envelope sweeps over a grid inside [1, x_max] of the trace.
BoundReport sweep_m(const Trace& trace, const LimitConstants& lc, const std::vector<double>& grid);
BoundReport sweep_mprime(const Trace& trace, const LimitConstants& lc, const std::vector<double>& grid);
BoundReport sweep_b(const Trace& trace, const LimitConstants& lc, const std::vector<double>& grid);
BoundReport sweep_w(const Trace& trace, const LimitConstants& lc, const std::vector<double>& grid);
BoundReport sweep_est_b(const Trace& trace, const LimitConstants& lc, const std::vector<double>& grid);
BoundReport sweep_est_w(const Trace& trace, const LimitConstants& lc, const std::vector<double>& grid);
BoundReport sweep_corfacil(const Trace& trace, const LimitConstants& lc, const std::vector<double>& grid);

/// |value| + tail against the lemma bound for sigma = c (n = 1, gamma = 0).
BoundReport sweep_osc1(const Params& p, const std::vector<double>& grid);

/// Gaussian-weighted variants n = 0, 1, 2 at the given gamma (factor 10).
BoundReport sweep_osc2(const Params& p, double gamma, const std::vector<double>& grid);

struct DecayFit {
  double slope = 0.0;
  std::size_t points = 0;
};

/// Least-squares slope of log|b(x) - B| against alpha x^2/4 - log x over the grid.
DecayFit decay_regression(const Trace& trace, const LimitConstants& lc, const std::vector<double>& grid);

}  // namespace llgss
