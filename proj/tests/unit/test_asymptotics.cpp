#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "llgss/asymptotics.hpp"
#include "llgss/errors.hpp"

using namespace llgss;

namespace {

// Phi(u) - Phi(s) for u in a short panel, by its own Gauss rule.
double phi_increment(double alpha, double s, double u) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  return GL::integrate([alpha](double v) { return std::exp(0.25 * alpha * v * v); }, s, u);
}

// int_a^b w(s) e^{i sigma Phi(s)} ds on panels spanning at most 0.3 rad of phase.
template <class W>
Complex oscillatory_panels(double sigma, double alpha, double a, double b, W weight) {
  using GL = boost::math::quadrature::gauss<double, 10>;
  auto rate = [&](double s) { return std::abs(sigma) * std::exp(0.25 * alpha * s * s) + 1.0; };
  Complex acc = 0.0;
  double s = a;
  while (s < b) {
    const double h = 0.3 / rate(s + 0.3 / rate(s));
    const double e = std::min(b, s + h);
    const double phi_s = phi(alpha, s);
    auto re = [&](double u) { return weight(u) * std::cos(sigma * (phi_s + phi_increment(alpha, s, u))); };
    auto im = [&](double u) { return weight(u) * std::sin(sigma * (phi_s + phi_increment(alpha, s, u))); };
    acc += Complex(GL::integrate(re, s, e), GL::integrate(im, s, e));
    s = e;
  }
  return acc;
}

}  // namespace

TEST_CASE("Gaussian-weighted oscillatory integral against direct quadrature") {
  const double alpha = 0.5;
  const double gamma = 0.5;
  for (double sigma : {0.5, -2.0}) {
    for (int n : {0, 1, 2}) {
      for (double x : {1.0, 2.0, 3.0}) {
        const OscIntegral r = osc_integral(sigma, alpha, x, gamma, n);
        const Complex ref = oscillatory_panels(sigma, alpha, x, 8.0, [n, gamma](double s) {
          return std::pow(s, n) * std::exp(-gamma * s * s);
        });
        CHECK(std::abs(r.value - ref) <= r.tail_bound + 1e-9);
        CHECK(r.tail_bound <= 0.01 * r.paper_bound);
      }
    }
  }
}

TEST_CASE("undamped n = 1 integral against integration by parts") {
  // int_x^inf s e^{i sigma Phi} = -(x e^{-alpha x^2/4} e^{i sigma Phi(x)}
  //   + int_x^inf (1 - alpha s^2/2) e^{-alpha s^2/4} e^{i sigma Phi} ds) / (i sigma).
  // The remainder is cut where its own boundary term is below 1e-7.
  for (auto [alpha, sigma] : {std::pair{1.0, 1.0}, {0.8, 0.7}}) {
    const double L = std::sqrt(36.0 / alpha);
    for (double x : {1.0, 2.0, 3.0}) {
      const OscIntegral r = osc_integral(sigma, alpha, x);
      const Complex rest = oscillatory_panels(sigma, alpha, x, L, [alpha](double s) {
        return (1.0 - 0.5 * alpha * s * s) * std::exp(-0.25 * alpha * s * s);
      });
      const Complex i_sigma(0.0, sigma);
      const Complex ref =
          -(x * std::polar(std::exp(-0.25 * alpha * x * x), sigma * phi(alpha, x)) + rest) / i_sigma;
      CHECK(std::abs(r.value - ref) <= r.tail_bound + 1e-6);
      CHECK(std::abs(r.value) <= r.paper_bound);
    }
  }
}

TEST_CASE("grid pass agrees with single points") {
  const std::vector<double> grid = make_grid(1.0, 4.0, 0.5);
  const auto all = osc_integral_grid(0.5, 0.5, grid, 0.1, 2);
  REQUIRE(all.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); i += 3) {
    const OscIntegral one = osc_integral(0.5, 0.5, grid[i], 0.1, 2);
    CHECK(std::abs(all[i].value - one.value) <= all[i].tail_bound + one.tail_bound + 1e-9);
  }
}

TEST_CASE("leading term dominates at large x") {
  for (double x : {4.0, 5.0}) {
    const OscIntegral r = osc_integral(0.5, 0.5, x);
    const double next = 4.0 * (0.25 * x * x + 1.0) * std::exp(-0.25 * x * x) / 0.25;
    CHECK(std::abs(r.value - osc_leading(0.5, 0.5, x)) <= next + r.tail_bound);
    CHECK(std::abs(osc_leading(0.5, 0.5, x)) == doctest::Approx(x / 0.5 * std::exp(-0.125 * x * x)));
  }
}

TEST_CASE("oscillatory integral input checks") {
  CHECK_THROWS_AS(osc_integral(0.5, 0.5, 0.5), DomainError);
  CHECK_THROWS_AS(osc_integral(0.5, 0.5, 2.0, 0.0, 3), DomainError);
  CHECK_THROWS_AS(osc_integral(0.5, 0.5, 2.0, 0.95), DomainError);
  CHECK_THROWS_AS(osc_integral(0.0, 0.5, 2.0), DomainError);
}

TEST_CASE("explicit envelopes") {
  const Params p = make_params(0.5, 0.6);
  const double x = 3.0;
  const double d = x * std::exp(-0.15 * 9.0);
  CHECK(est_b_envelope(p, x) == doctest::Approx(6.0 * 0.8 / (0.5 * 0.6) * d));
  CHECK(est_w_envelope(p, x) == doctest::Approx(10.0 * 0.8 / (0.5 * 0.36) * d));
}

TEST_CASE("make_grid") {
  const auto g = make_grid(1.0, 2.0, 0.3);
  REQUIRE(g.size() == 4u);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == doctest::Approx(1.9));
  CHECK(make_grid(1.0, 2.0, 0.25).back() == doctest::Approx(2.0));
}

TEST_CASE("alpha = 1 expansions are exact") {
  // beta = 0: b = e3 and e^{i psi}(m + i n) = e1 + i e2 for every x.
  const Trace t = integrate(make_params(0.8, 1.0), 6.0, 1e-10);
  LimitConstants lc;
  lc.B = {0.0, 0.0, 1.0};
  lc.W = {Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(0.0, 0.0)};
  polar_decompose(lc);
  // The envelopes vanish with beta; the trace's own accuracy is the resolution.
  lc.err_est = t.tol();
  const std::vector<double> grid = make_grid(1.0, 6.0, 0.25);
  for (const BoundReport& r : {sweep_m(t, lc, grid), sweep_b(t, lc, grid), sweep_w(t, lc, grid)}) {
    CHECK(r.pass);
    for (double d : r.defect) {
      CHECK(d < 1e-8);
    }
  }
}

TEST_CASE("envelope sweeps at c = alpha = 0.5") {
  const ConstantsRun run = compute_constants(make_params(0.5, 0.5), 1e-8);
  const Trace& t = *run.trace;
  const std::vector<double> grid = make_grid(1.0, t.x_max(), 0.5);
  for (const BoundReport& r : {sweep_m(t, run.matching, grid), sweep_mprime(t, run.matching, grid),
                               sweep_b(t, run.matching, grid), sweep_w(t, run.matching, grid),
                               sweep_est_b(t, run.matching, grid), sweep_est_w(t, run.matching, grid),
                               sweep_corfacil(t, run.matching, grid)}) {
    INFO(r.name);
    CHECK(r.pass);
    CHECK(r.x.size() == grid.size());
  }
  // b approaches B like x e^{-alpha x^2/4}.
  const DecayFit f = decay_regression(t, run.matching, make_grid(3.0, t.x_max(), 0.05));
  CHECK(std::abs(f.slope + 1.0) < 0.15);
  const CorFacil cf = corfacil_check(t, run.matching, 5.0);
  CHECK(cf.pass);
}
