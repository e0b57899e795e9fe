#pragma once

// Embedded Runge-Kutta 8(5,3) stepper with dense output and a PI step-size
// controller. Fixed-size states; the right-hand side is any callable
// rhs(x, const State&, State&).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "llgss/dop853_tableau.hpp"

namespace llgss::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Tolerance {
  double rtol = 1e-10;
  double atol = 1e-10;
};

/// 7th-order interpolant over one accepted step [x0, x0 + h].
template <std::size_t N>
struct DenseSegment {
  double x0 = 0.0;
  double h = 0.0;
  State<N> y0{};
  std::array<State<N>, 7> coeff{};

  State<N> operator()(double x) const {
    const double s = (x - x0) / h;
    const double s1 = 1.0 - s;
    State<N> y{};
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0.0;
      for (int j = 6; j >= 0; --j) {
        acc += coeff[j][i];
        acc *= ((6 - j) % 2 == 0) ? s : s1;
      }
      y[i] = y0[i] + acc;
    }
    return y;
  }
};

template <std::size_t N>
class Dop853 {
 public:
  /// One trial step of size h from (x, y) with f = rhs(x, y). Writes the
  /// 8th-order solution and its derivative; returns the scaled error norm
  /// (accept when <= 1).
  template <class Rhs>
  double attempt(Rhs& rhs, double x, const State<N>& y, const State<N>& f, double h,
                 const Tolerance& tol, State<N>& y_new, State<N>& f_new) {
    using namespace dop853;
    k_[0] = f;
    State<N> tmp;
    for (int s = 1; s < kStages; ++s) {
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) {
          acc += A[s][j] * k_[j][i];
        }
        tmp[i] = y[i] + h * acc;
      }
      rhs(x + C[s] * h, tmp, k_[s]);
    }
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0.0;
      for (int j = 0; j < kStages; ++j) {
        acc += B[j] * k_[j][i];
      }
      y_new[i] = y[i] + h * acc;
    }
    rhs(x + h, y_new, f_new);
    k_[kStages] = f_new;

    double err5 = 0.0;
    double err3 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double scale = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      double e5 = 0.0;
      double e3 = 0.0;
      for (int j = 0; j <= kStages; ++j) {
        e5 += E5[j] * k_[j][i];
        e3 += E3[j] * k_[j][i];
      }
      e5 /= scale;
      e3 /= scale;
      err5 += e5 * e5;
      err3 += e3 * e3;
    }
    if (err5 == 0.0 && err3 == 0.0) {
      return 0.0;
    }
    const double denom = err5 + 0.01 * err3;
    return std::abs(h) * err5 / std::sqrt(denom * static_cast<double>(N));
  }

  /// Dense output for the step most recently passed to attempt(); valid only
  /// when that step was accepted.
  template <class Rhs>
  DenseSegment<N> dense(Rhs& rhs, double x, const State<N>& y, const State<N>& y_new, double h) {
    using namespace dop853;
    State<N> tmp;
    for (int s = kStages + 1; s < kStagesExtended; ++s) {
      for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) {
          acc += A[s][j] * k_[j][i];
        }
        tmp[i] = y[i] + h * acc;
      }
      rhs(x + C[s] * h, tmp, k_[s]);
    }
    DenseSegment<N> seg;
    seg.x0 = x;
    seg.h = h;
    seg.y0 = y;
    const State<N>& f_old = k_[0];
    const State<N>& f_new = k_[kStages];
    for (std::size_t i = 0; i < N; ++i) {
      const double dy = y_new[i] - y[i];
      seg.coeff[0][i] = dy;
      seg.coeff[1][i] = h * f_old[i] - dy;
      seg.coeff[2][i] = 2.0 * dy - h * (f_new[i] + f_old[i]);
      for (int r = 0; r < 4; ++r) {
        double acc = 0.0;
        for (int j = 0; j < kStagesExtended; ++j) {
          acc += D[r][j] * k_[j][i];
        }
        seg.coeff[3 + r][i] = h * acc;
      }
    }
    return seg;
  }

 private:
  std::array<State<N>, dop853::kStagesExtended> k_{};
};

/// PI step-size controller (Gustafsson form) for an order-8 method.
struct PiController {
  double safety = 0.9;
  double k_err = 1.0 / 8.0 - 0.75 * 0.04;
  double k_old = 0.04;
  double min_factor = 0.2;
  double max_factor = 6.0;
  double err_old = 1e-4;

  /// Step-size factor after an accepted step with error norm err.
  double accept(double err) {
    const double e = std::max(err, 1e-10);
    double fac = safety * std::pow(e, -k_err) * std::pow(err_old, k_old);
    fac = std::clamp(fac, min_factor, max_factor);
    err_old = std::max(err, 1e-4);
    return fac;
  }

  /// Step-size factor after a rejection.
  double reject(double err) const {
    const double fac = safety * std::pow(err, -1.0 / 8.0);
    return std::clamp(fac, min_factor, 1.0);
  }
};

/// Resumable adaptive integration from x0 toward x_end (either direction).
/// advance() performs exactly one accepted step, so a saved Snapshot replays
/// bit-identically.
template <std::size_t N, class Rhs>
class Driver {
 public:
  struct Snapshot {
    double x = 0.0;
    State<N> y{};
    State<N> f{};
    double h = 0.0;
    double err_old = 1e-4;
    std::uint64_t steps = 0;
    double x_comp = 0.0;
  };

  Driver(Rhs rhs, double x0, const State<N>& y0, double x_end, Tolerance tol, double h0)
      : rhs_(std::move(rhs)), x_(x0), y_(y0), x_end_(x_end), tol_(tol) {
    dir_ = x_end >= x0 ? 1.0 : -1.0;
    h_ = dir_ * std::abs(h0);
    rhs_(x_, y_, f_);
    evals_ = 1;
  }

  Driver(Rhs rhs, const Snapshot& snap, double x_end, Tolerance tol)
      : rhs_(std::move(rhs)), x_(snap.x), y_(snap.y), f_(snap.f), h_(snap.h), x_end_(x_end), tol_(tol) {
    dir_ = x_end >= snap.x ? 1.0 : -1.0;
    ctrl_.err_old = snap.err_old;
    steps_ = snap.steps;
    x_comp_ = snap.x_comp;
  }

  bool done() const { return dir_ * (x_end_ - x_) <= 0.0; }

  /// One accepted step; max_step(x) caps |h|. Returns false when already at x_end.
  template <class Guard>
  bool advance(const Guard& max_step) {
    if (done()) {
      return false;
    }
    double h = h_;
    for (;;) {
      const double cap = max_step(x_);
      if (std::abs(h) > cap) {
        h = dir_ * cap;
      }
      bool last = false;
      if (dir_ * (x_ + h - x_end_) >= 0.0) {
        h = x_end_ - x_;
        last = true;
      }
      if (std::abs(h) <= 1e-15 * std::max(1.0, std::abs(x_))) {
        throw std::runtime_error("ode: step size underflow");
      }
      const double err = stepper_.attempt(rhs_, x_, y_, f_, h, tol_, y_new_, f_new_);
      evals_ += 12;
      if (err <= 1.0 && std::isfinite(err)) {
        const double fac = ctrl_.accept(err);
        x_prev_ = x_;
        y_prev_ = y_;
        h_last_ = h;
        if (last) {
          x_ = x_end_;
          x_comp_ = 0.0;
        } else {
          // Compensated sum: millions of steps would otherwise shift x by
          // enough to move the phase c Phi(x) visibly.
          const double inc = h - x_comp_;
          const double sum = x_ + inc;
          x_comp_ = (sum - x_) - inc;
          x_ = sum;
        }
        y_ = y_new_;
        f_ = f_new_;
        // A step shortened to hit x_end does not shrink the next proposal.
        h_ = last ? dir_ * std::max(std::abs(h) * fac, std::abs(h_)) : h * fac;
        ++steps_;
        return true;
      }
      ++rejected_;
      h *= std::isfinite(err) ? ctrl_.reject(err) : 0.2;
    }
  }

  /// Interpolant over the most recent accepted step.
  DenseSegment<N> dense() {
    evals_ += 3;
    return stepper_.dense(rhs_, x_prev_, y_prev_, y_new_, h_last_);
  }

  Snapshot snapshot() const { return Snapshot{x_, y_, f_, h_, ctrl_.err_old, steps_, x_comp_}; }

  double x() const { return x_; }
  double x_prev() const { return x_prev_; }
  const State<N>& y() const { return y_; }
  /// For post-step projections that leave the derivative unchanged (e.g. phase reduction).
  State<N>& y_mut() { return y_; }
  const State<N>& f() const { return f_; }
  double h_last() const { return h_last_; }
  std::uint64_t evals() const { return evals_; }
  std::uint64_t steps() const { return steps_; }
  std::uint64_t rejected() const { return rejected_; }

 private:
  Rhs rhs_;
  Dop853<N> stepper_;
  PiController ctrl_;
  double x_ = 0.0;
  double x_comp_ = 0.0;
  State<N> y_{};
  State<N> f_{};
  double h_ = 0.0;
  double x_end_ = 0.0;
  double dir_ = 1.0;
  Tolerance tol_;
  double x_prev_ = 0.0;
  double h_last_ = 0.0;
  State<N> y_prev_{};
  State<N> y_new_{};
  State<N> f_new_{};
  std::uint64_t evals_ = 0;
  std::uint64_t steps_ = 0;
  std::uint64_t rejected_ = 0;
};

}  // namespace llgss::ode
