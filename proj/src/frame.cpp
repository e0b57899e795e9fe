#include "llgss/frame.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "llgss/errors.hpp"

namespace llgss {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// State layout.
constexpr std::size_t kM = 0;
constexpr std::size_t kN = 3;
constexpr std::size_t kB = 6;
constexpr std::size_t kPsi = 9;
constexpr std::size_t kIB = 10;
constexpr std::size_t kIWre = 13;
constexpr std::size_t kIWim = 16;

Vec3 get3(const StateVector& y, std::size_t at) { return {y[at], y[at + 1], y[at + 2]}; }

void put3(StateVector& y, std::size_t at, const Vec3& v) {
  y[at] = v[0];
  y[at + 1] = v[1];
  y[at + 2] = v[2];
}

void gram_schmidt(StateVector& y) {
  Vec3 m = get3(y, kM);
  Vec3 n = get3(y, kN);
  m = (1.0 / norm(m)) * m;
  n = n - dot(n, m) * m;
  n = (1.0 / norm(n)) * n;
  put3(y, kM, m);
  put3(y, kN, n);
  put3(y, kB, cross(m, n));
}

// One accepted step plus the post-step projections. Shared by integration
// and replay so both see identical states.
bool step(FrameDriver& d, const Params& p, const IntegrateOptions& opt, std::int64_t& winding) {
  if (!d.advance([&p](double x) { return frequency_guard(p, x); })) {
    return false;
  }
  StateVector& y = d.y_mut();
  const double raw = y[kPsi];
  if (raw < 0.0 || raw >= kTwoPi) {
    const double turns = std::floor(raw / kTwoPi);
    y[kPsi] = reduce_angle(raw);
    winding += static_cast<std::int64_t>(turns);
  }
  if (opt.reorthonormalize && d.steps() % 1000 == 0) {
    gram_schmidt(y);
  }
  return true;
}

bool ahead(double dir, double a, double b) { return dir * (a - b) > 0.0; }

}  // namespace

StateVector pack(const AugmentedState& s) {
  StateVector y{};
  put3(y, kM, s.frame.m);
  put3(y, kN, s.frame.n);
  put3(y, kB, s.frame.b);
  y[kPsi] = s.psi;
  put3(y, kIB, s.iB);
  for (std::size_t j = 0; j < 3; ++j) {
    y[kIWre + j] = s.iW[j].real();
    y[kIWim + j] = s.iW[j].imag();
  }
  return y;
}

AugmentedState unpack(double x, const StateVector& y) {
  AugmentedState s;
  s.frame.x = x;
  s.frame.m = get3(y, kM);
  s.frame.n = get3(y, kN);
  s.frame.b = get3(y, kB);
  s.psi = reduce_angle(y[kPsi]);
  s.iB = get3(y, kIB);
  for (std::size_t j = 0; j < 3; ++j) {
    s.iW[j] = Complex(y[kIWre + j], y[kIWim + j]);
  }
  return s;
}

AugmentedState initial_state() { return AugmentedState{}; }

double orthonormality_defect(const Frame& f) {
  const double g[6] = {dot(f.m, f.m) - 1.0, dot(f.n, f.n) - 1.0, dot(f.b, f.b) - 1.0,
                       dot(f.m, f.n),       dot(f.m, f.b),       dot(f.n, f.b)};
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    s += g[i] * g[i];
  }
  for (int i = 3; i < 6; ++i) {
    s += 2.0 * g[i] * g[i];
  }
  return std::sqrt(s);
}

double component_identity_defect(const Frame& f) {
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    worst = std::max(worst, std::abs(f.m[j] * f.m[j] + f.n[j] * f.n[j] + f.b[j] * f.b[j] - 1.0));
  }
  return worst;
}

Frame reflect(const Frame& f) {
  Frame r;
  r.x = -f.x;
  r.m = {f.m[0], -f.m[1], -f.m[2]};
  r.n = {-f.n[0], f.n[1], f.n[2]};
  r.b = {-f.b[0], f.b[1], f.b[2]};
  return r;
}

AugmentedState reflect(const AugmentedState& s) {
  AugmentedState r;
  r.frame = reflect(s.frame);
  r.psi = reduce_angle(-s.psi);
  // iB picks up the parity of m; iW that of n and b together with psi -> -psi.
  r.iB = {-s.iB[0], s.iB[1], s.iB[2]};
  r.iW = {std::conj(s.iW[0]), -std::conj(s.iW[1]), -std::conj(s.iW[2])};
  return r;
}

void frame_rhs(const Params& p, double x, const StateVector& y, StateVector& dy) {
  const double x2 = x * x;
  const double k = p.c * std::exp(0.25 * p.alpha * x2);
  const double t = 0.5 * p.beta * x;
  for (std::size_t j = 0; j < 3; ++j) {
    const double m = y[kM + j];
    const double n = y[kN + j];
    const double b = y[kB + j];
    dy[kM + j] = k * n;
    dy[kN + j] = -k * m - t * b;
    dy[kB + j] = t * n;
  }
  dy[kPsi] = k;
  const double decay = std::exp(-0.25 * p.alpha * x2);
  const double lin = 1.0 - 0.5 * p.alpha * x2;
  const double wb = lin * decay;
  const double wn = 0.5 * p.beta * x2 * decay;
  const double cs = std::cos(y[kPsi]);
  const double sn = std::sin(y[kPsi]);
  for (std::size_t j = 0; j < 3; ++j) {
    dy[kIB + j] = wb * y[kM + j];
    const double g = wn * y[kN + j] + wb * y[kB + j];
    dy[kIWre + j] = cs * g;
    dy[kIWim + j] = sn * g;
  }
}

// Largest rotation angle per step. At 0.2 the per-step truncation of the
// frame rotation accumulated to ~3e-8 in W over 1e6 steps; halving it cuts
// that by about 2^8.
constexpr double kGuardAngle = 0.1;

double frequency_guard(const Params& p, double x) {
  return kGuardAngle / (1.0 + p.c * std::exp(0.25 * p.alpha * x * x) + 0.5 * p.beta * std::abs(x));
}

double projected_rhs_evals(const Params& p, double x_max) {
  const double x = std::abs(x_max);
  if (x > phi_cap(p.alpha)) {
    return HUGE_VAL;
  }
  return 12.0 * (x + p.c * phi(p.alpha, x) + 0.25 * p.beta * x * x) / kGuardAngle;
}

std::vector<AugmentedState> Trace::samples() const {
  std::vector<AugmentedState> out;
  out.reserve(checkpoints_.size() + 1);
  for (const auto& cp : checkpoints_) {
    out.push_back(unpack(cp.x, cp.y));
  }
  if (out.empty() || out.back().frame.x != final_.frame.x) {
    out.push_back(final_);
  }
  return out;
}

Trace integrate(const Params& p, double x_max, double tol) {
  if (!(x_max > 0.0 && x_max <= kTruncationCap)) {
    throw DomainError("x_max must be in (0, 12]");
  }
  if (!(tol >= 1e-13 && tol <= 1e-6)) {
    throw DomainError("tol must be in [1e-13, 1e-6]");
  }
  IntegrateOptions opt;
  opt.tol = tol;
  return integrate(p, initial_state(), x_max, opt);
}

Trace integrate(const Params& p, const AugmentedState& start, double x_end, const IntegrateOptions& opt) {
  if (!(opt.tol > 0.0) || !(opt.budget > 0.0) || opt.max_checkpoints < 2) {
    throw DomainError("integrate: invalid options");
  }
  const double x0 = start.frame.x;
  if (!std::isfinite(x_end) || x_end == x0) {
    throw DomainError("integrate: empty interval");
  }
  // The cost model is symmetric in x and additive over [0, |x|].
  const double lo = std::min(std::abs(x0), std::abs(x_end));
  const double hi = std::max(std::abs(x0), std::abs(x_end));
  const double projected = (x0 * x_end >= 0.0) ? projected_rhs_evals(p, hi) - projected_rhs_evals(p, lo)
                                                : projected_rhs_evals(p, hi) + projected_rhs_evals(p, lo);
  if (projected > opt.budget) {
    std::ostringstream os;
    os << "integrate: projected cost " << projected << " right-hand-side evaluations exceeds the budget "
       << opt.budget << " (c = " << p.c << ", alpha = " << p.alpha << ", x_end = " << x_end << ")";
    throw NumericalError(os.str());
  }

  Trace t;
  t.params_ = p;
  t.options_ = opt;
  t.x_start_ = x0;
  t.x_end_ = x_end;
  t.initial_ = start;
  t.initial_.psi = reduce_angle(start.psi);

  const double h0 = std::min(frequency_guard(p, x0), 0.01);
  FrameDriver d(FrameRhs{p}, x0, pack(t.initial_), x_end, ode::Tolerance{opt.tol, opt.tol}, h0);
  t.checkpoints_.push_back(d.snapshot());
  t.stats_.max_defect = orthonormality_defect(start.frame);

  std::int64_t winding = 0;
  while (step(d, p, opt, winding)) {
    const StateVector& y = d.y();
    Frame f;
    f.m = get3(y, kM);
    f.n = get3(y, kN);
    f.b = get3(y, kB);
    const double defect = orthonormality_defect(f);
    t.stats_.max_defect = std::max(t.stats_.max_defect, defect);
    if (!(defect <= kDefectAbort)) {
      std::ostringstream os;
      os << "integrate: orthonormality defect " << defect << " at x = " << d.x() << " exceeds " << kDefectAbort;
      throw NumericalError(os.str());
    }
    if (static_cast<double>(d.evals()) > opt.budget) {
      std::ostringstream os;
      os << "integrate: budget of " << opt.budget << " right-hand-side evaluations exhausted at x = " << d.x();
      throw NumericalError(os.str());
    }
    if (d.steps() % t.stride_ == 0 && !d.done()) {
      t.checkpoints_.push_back(d.snapshot());
      if (t.checkpoints_.size() > opt.max_checkpoints) {
        const std::uint64_t keep = 2 * t.stride_;
        std::erase_if(t.checkpoints_, [keep](const FrameDriver::Snapshot& s) { return s.steps % keep != 0; });
        t.stride_ = keep;
      }
    }
  }
  t.final_ = unpack(d.x(), d.y());
  t.stats_.steps = d.steps();
  t.stats_.rejected = d.rejected();
  t.stats_.rhs_evals = d.evals();
  t.stats_.winding = winding;
  return t;
}

struct TraceCursor::Impl {
  const Trace* trace = nullptr;
  double dir = 1.0;
  std::optional<FrameDriver> driver;
  std::optional<ode::DenseSegment<kStateDim>> seg;
  std::int64_t winding = 0;

  // Last checkpoint not beyond x in the direction of integration.
  const FrameDriver::Snapshot& checkpoint_before(double x) const {
    const auto& cps = trace->checkpoints_;
    auto it = std::upper_bound(cps.begin(), cps.end(), x, [this](double v, const FrameDriver::Snapshot& s) {
      return dir * (v - s.x) < 0.0;
    });
    return *(it - 1);
  }

  bool in_segment(double x) const {
    if (!seg) {
      return false;
    }
    const double a = seg->x0;
    const double b = seg->x0 + seg->h;
    return !ahead(dir, a, x) && !ahead(dir, x, b);
  }
};

TraceCursor::TraceCursor(const Trace& trace) : impl_(std::make_unique<Impl>()) {
  impl_->trace = &trace;
  impl_->dir = trace.x_end() > trace.x_start() ? 1.0 : -1.0;
}

TraceCursor::~TraceCursor() = default;
TraceCursor::TraceCursor(TraceCursor&&) noexcept = default;
TraceCursor& TraceCursor::operator=(TraceCursor&&) noexcept = default;

AugmentedState TraceCursor::at(double x) {
  Impl& s = *impl_;
  const Trace& t = *s.trace;
  if (!std::isfinite(x) || ahead(s.dir, t.x_start(), x) || ahead(s.dir, x, t.x_end())) {
    std::ostringstream os;
    os << "frame_at: x = " << x << " outside the trace range [" << std::min(t.x_start(), t.x_end()) << ", "
       << std::max(t.x_start(), t.x_end()) << "]";
    throw RangeError(os.str(), std::abs(x));
  }
  if (x == t.x_start()) {
    return t.initial();
  }
  if (x == t.x_end()) {
    return t.final_state();
  }
  const FrameDriver::Snapshot& cp = s.checkpoint_before(x);
  if (cp.x == x) {
    return unpack(cp.x, cp.y);
  }
  if (!s.in_segment(x)) {
    // Restart when behind, or when a checkpoint lies between the driver and x.
    if (!s.driver || ahead(s.dir, s.driver->x(), x) || ahead(s.dir, cp.x, s.driver->x())) {
      s.driver.emplace(FrameRhs{t.params()}, cp, t.x_end(), ode::Tolerance{t.tol(), t.tol()});
      s.seg.reset();
    }
    while (ahead(s.dir, x, s.driver->x())) {
      step(*s.driver, t.params(), t.options(), s.winding);
    }
    s.seg = s.driver->dense();
  }
  return unpack(x, (*s.seg)(x));
}

AugmentedState frame_at(const Trace& trace, double x) { return TraceCursor(trace).at(x); }

AugmentedState frame_at_signed(const Trace& trace, double x) {
  if (x >= 0.0) {
    return frame_at(trace, x);
  }
  return reflect(frame_at(trace, -x));
}

Vec3 profile_residual(const Trace& trace, double x, double h) {
  if (!(h > 0.0)) {
    throw DomainError("profile_residual: h must be positive");
  }
  const Params& p = trace.params();
  const Vec3 mm = frame_at_signed(trace, x - h).frame.m;
  const Vec3 m0 = frame_at_signed(trace, x).frame.m;
  const Vec3 mp = frame_at_signed(trace, x + h).frame.m;
  const Vec3 d1 = (0.5 / h) * (mp - mm);
  const Vec3 d2 = (1.0 / (h * h)) * (mp - 2.0 * m0 + mm);
  return p.alpha * d2 + (p.alpha * dot(d1, d1)) * m0 + p.beta * cross(m0, d2) - (0.5 * x) * d1;
}

double gradient_magnitude_check(const Trace& trace, double x) {
  const Params& p = trace.params();
  const AugmentedState s = frame_at(trace, x);
  const double k = p.c * std::exp(0.25 * p.alpha * x * x);
  return k * (norm(s.frame.n) - 1.0);
}

namespace {

// Composite 20-point Gauss-Legendre rule for int_a^b k eta_j, nodes visited
// in increasing order so a cursor replays each step once.
Complex eta_integral(const Trace& trace, int j, double a, double b, double& min_den) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const Params& p = trace.params();
  if (a == b) {
    return 0.0;
  }
  const double kmax = p.c * std::exp(0.25 * p.alpha * std::max(a * a, b * b));
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) * (1.0 + kmax) / 0.25)));
  const double w = (b - a) / panels;
  const auto& xs = Rule::abscissa();
  const auto& ws = Rule::weights();
  std::vector<std::pair<double, double>> nodes;
  nodes.reserve(static_cast<std::size_t>(panels) * 20);
  for (int i = 0; i < panels; ++i) {
    const double mid = a + (i + 0.5) * w;
    const double half = 0.5 * w;
    for (std::size_t q = 0; q < xs.size(); ++q) {
      nodes.emplace_back(mid - half * xs[q], half * ws[q]);
      if (xs[q] != 0.0) {
        nodes.emplace_back(mid + half * xs[q], half * ws[q]);
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  if (b < a) {
    std::reverse(nodes.begin(), nodes.end());
  }
  TraceCursor cur(trace);
  Complex sum = 0.0;
  for (const auto& [s, wt] : nodes) {
    const Frame f = cur.at(s).frame;
    const double den = 1.0 + f.m[j];
    min_den = std::min(min_den, den);
    const double k = p.c * std::exp(0.25 * p.alpha * s * s);
    sum += wt * k * Complex(f.n[j], f.b[j]) / den;
  }
  return sum;
}

}  // namespace

GjResidual gj_residual(const Trace& trace, int j, double x, double h) {
  if (j < 0 || j > 2) {
    throw DomainError("gj_residual: component index must be 0, 1 or 2");
  }
  if (!(x <= 6.0)) {
    throw DomainError("gj_residual: x must not exceed 6");
  }
  if (!(h > 0.0) || x - h < trace.x_start() || x + h > trace.x_end()) {
    throw DomainError("gj_residual: stencil outside the trace range");
  }
  const Params& p = trace.params();
  GjResidual r;
  r.min_denominator = HUGE_VAL;
  const Complex G = eta_integral(trace, j, trace.x_start(), x, r.min_denominator);
  const Complex Gp = G + eta_integral(trace, j, x, x + h, r.min_denominator);
  const Complex Gm = G + eta_integral(trace, j, x, x - h, r.min_denominator);
  if (r.min_denominator < 0.05) {
    std::ostringstream os;
    os << "gj_residual: singular eta, min(1 + m_j) = " << r.min_denominator << " on [0, " << x << "]";
    throw DomainError(os.str());
  }
  const Complex g = std::exp(0.5 * G);
  const Complex gp = std::exp(0.5 * Gp);
  const Complex gm = std::exp(0.5 * Gm);
  const Complex d1 = (gp - gm) / (2.0 * h);
  const Complex d2 = (gp - 2.0 * g + gm) / (h * h);
  const Complex t1 = d2;
  const Complex t2 = -(0.5 * x) * Complex(p.alpha, p.beta) * d1;
  const Complex t3 = 0.25 * p.c * p.c * std::exp(0.5 * p.alpha * x * x) * g;
  r.g = g;
  r.residual = t1 + t2 + t3;
  const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
  r.relative = scale > 0.0 ? std::abs(r.residual) / scale : 0.0;
  return r;
}

Frame explicit_alpha1(double c, double x) {
  const double theta = phase_value(make_params(c, 1.0), x).psi;
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  Frame f;
  f.x = x;
  f.m = {cs, sn, 0.0};
  f.n = {-sn, cs, 0.0};
  f.b = {0.0, 0.0, 1.0};
  return f;
}

Frame explicit_c0(double alpha, double x) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must be in (0,1]");
  }
  const double beta = std::sqrt((1.0 - alpha) * (1.0 + alpha));
  const double theta = 0.25 * beta * x * x;
  Frame f;
  f.x = x;
  f.m = {1.0, 0.0, 0.0};
  f.n = {0.0, std::cos(theta), -std::sin(theta)};
  f.b = {0.0, std::sin(theta), std::cos(theta)};
  return f;
}

namespace {

template <class Emit>
void for_each_row(const Trace& trace, double spacing, Emit emit) {
  if (!(spacing > 0.0)) {
    throw DomainError("spacing must be positive");
  }
  const double x0 = trace.x_start();
  const double x1 = trace.x_end();
  const double dir = x1 > x0 ? 1.0 : -1.0;
  TraceCursor cur(trace);
  for (std::uint64_t i = 0;; ++i) {
    const double x = x0 + dir * spacing * static_cast<double>(i);
    if (!ahead(dir, x1, x)) {
      break;
    }
    emit(cur.at(x));
  }
  emit(trace.final_state());
}

std::array<double, 11> row_values(const AugmentedState& s) {
  const Frame& f = s.frame;
  return {f.x, f.m[0], f.m[1], f.m[2], f.n[0], f.n[1], f.n[2], f.b[0], f.b[1], f.b[2], s.psi};
}

}  // namespace

void write_trace_csv(std::ostream& os, const Trace& trace, double spacing) {
  os << "x,m1,m2,m3,n1,n2,n3,b1,b2,b3,psi\n";
  char buf[32];
  for_each_row(trace, spacing, [&os, &buf](const AugmentedState& s) {
    const auto v = row_values(s);
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", v[i]);
      os << buf << (i + 1 < v.size() ? ',' : '\n');
    }
  });
}

void write_trace_binary(std::ostream& os, const Trace& trace, double spacing) {
  for_each_row(trace, spacing, [&os](const AugmentedState& s) {
    for (double v : row_values(s)) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      if constexpr (std::endian::native == std::endian::big) {
        bits = __builtin_bswap64(bits);
      }
      char bytes[8];
      std::memcpy(bytes, &bits, sizeof bits);
      os.write(bytes, sizeof bytes);
    }
  });
}

}  // namespace llgss
