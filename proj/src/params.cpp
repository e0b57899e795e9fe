#include "llgss/params.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "llgss/errors.hpp"

namespace llgss {

Params make_params(double c, double alpha) {
  if (!std::isfinite(c) || !std::isfinite(alpha)) {
    throw DomainError("c and alpha must be finite");
  }
  if (c <= 0.0) {
    throw DomainError("c must be positive");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must be in (0,1]");
  }
  return Params{c, alpha, std::sqrt((1.0 - alpha) * (1.0 + alpha))};
}

double phi_cap(double alpha) { return std::sqrt(4.0 * 700.0 / alpha); }

double phi(double alpha, double x) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must be in (0,1]");
  }
  if (!std::isfinite(x) || std::abs(x) > phi_cap(alpha)) {
    std::ostringstream os;
    os << "phi: |x| = " << std::abs(x) << " exceeds the overflow cap " << phi_cap(alpha);
    throw DomainError(os.str());
  }
  if (x == 0.0) {
    return 0.0;
  }
  const double ax = std::abs(x);
  auto f = [alpha](double s) { return std::exp(0.25 * alpha * s * s); };
  // On a half-unit panel the exponent changes by at most alpha |x| / 4 <= 14
  // below the cap, where 30-point Gauss-Legendre is exact to rounding. An
  // adaptive rule asked for 1e-15 cannot certify it and subdivides to full depth.
  double sum = 0.0;
  double a = 0.0;
  while (a < ax) {
    const double b = std::min(ax, a + 0.5);
    sum += boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
    a = b;
  }
  return x < 0.0 ? -sum : sum;
}

double phi_asymptotic(double alpha, double x) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must be in (0,1]");
  }
  if (!(x >= 3.0 / std::sqrt(alpha))) {
    throw DomainError("phi_asymptotic: x below the asymptotic regime 3/sqrt(alpha)");
  }
  const double u = 1.0 / (alpha * x * x);
  return 2.0 * std::exp(0.25 * alpha * x * x) / (alpha * x) * (1.0 + 2.0 * u + 12.0 * u * u);
}

double reduce_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r < 0.0) {
    r += two_pi;
  }
  if (r >= two_pi) {
    r = 0.0;
  }
  return r;
}

PhaseValue phase_value(const Params& p, double x) {
  const double v = phi(p.alpha, x);
  return PhaseValue{x, v, reduce_angle(p.c * v)};
}

double gauss_tail(double gamma, int n, double x) {
  if (!(gamma > 0.0)) {
    throw DomainError("gauss_tail: gamma must be positive");
  }
  const double e = std::exp(-gamma * x * x);
  // int_x^inf e^{-gamma s^2} ds = sqrt(pi / gamma) / 2 * erfc(sqrt(gamma) x)
  auto tail0 = [&] { return 0.5 * std::sqrt(std::numbers::pi / gamma) * std::erfc(std::sqrt(gamma) * x); };
  switch (n) {
    case 0:
      return tail0();
    case 1:
      return e / (2.0 * gamma);
    case 2:
      return x * e / (2.0 * gamma) + tail0() / (2.0 * gamma);
    case 3:
      return (1.0 + gamma * x * x) * e / (2.0 * gamma * gamma);
    default:
      throw DomainError("gauss_tail: n must be in {0,1,2,3}");
  }
}

double tail_bound(double gamma, int n, double x) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw DomainError("tail_bound: gamma must be in (0,1]");
  }
  if (n < 0 || n > 3) {
    throw DomainError("tail_bound: n must be in {0,1,2,3}");
  }
  if (n <= 1 && !(x > 0.0)) {
    throw DomainError("tail_bound: x must be positive");
  }
  if (n >= 2 && !(x >= 1.0)) {
    throw DomainError("tail_bound: x must be >= 1");
  }
  const double e = std::exp(-gamma * x * x);
  switch (n) {
    case 0:
      return e / (2.0 * gamma * x);
    case 1:
      return e / (2.0 * gamma);
    case 2:
      return x * e / (gamma * gamma);
    default:
      return x * x * e / (gamma * gamma);
  }
}

double tail_lower_bound_n0(double gamma, double x) {
  return x * std::exp(-gamma * x * x) / (2.0 * gamma * x * x + 1.0);
}

double limit_integral_tail(const Params& p, double x) {
  const double a = p.alpha;
  return p.beta / (2.0 * p.c) * (2.0 / (a * x) + 16.0 * x / (a * a)) * std::exp(-0.25 * a * x * x);
}

TruncationPoint truncation_point(const Params& p, double tol) {
  if (!(tol > 0.0)) {
    throw DomainError("truncation_point: tol must be positive");
  }
  if (limit_integral_tail(p, kTruncationFloor) <= tol) {
    return {kTruncationFloor, limit_integral_tail(p, kTruncationFloor), false};
  }
  if (limit_integral_tail(p, kTruncationCap) > tol) {
    return {kTruncationCap, limit_integral_tail(p, kTruncationCap), true};
  }
  // Scan for the first crossing, then bisect; the bound need not be monotone on
  // the whole interval for very small alpha.
  double lo = kTruncationFloor;
  double hi = kTruncationCap;
  for (double x = kTruncationFloor; x <= kTruncationCap; x += 0.05) {
    if (limit_integral_tail(p, x) <= tol) {
      hi = x;
      break;
    }
    lo = x;
  }
  for (int i = 0; i < 60 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (limit_integral_tail(p, mid) <= tol ? hi : lo) = mid;
  }
  return {hi, limit_integral_tail(p, hi), false};
}

}  // namespace llgss
