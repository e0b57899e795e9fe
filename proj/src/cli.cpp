#include "llgss/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "llgss/errors.hpp"
#include "llgss/selfsimilar.hpp"
#include "llgss/verify.hpp"

namespace llgss {

using nlohmann::json;

void to_json(json& j, const RunConfig& cfg) {
  j = json{{"subcommand", cfg.subcommand}, {"c", cfg.c},
           {"alpha", cfg.alpha},           {"tol", cfg.tol},
           {"x_max", cfg.x_max},           {"T", cfg.T},
           {"output", cfg.output},         {"format", cfg.format},
           {"seed", cfg.seed},             {"budget", cfg.budget},
           {"id", cfg.id},                 {"spacing", cfg.spacing},
           {"grid", cfg.grid},             {"vary", cfg.vary},
           {"bump_center", cfg.bump_center}, {"bump_radius", cfg.bump_radius}};
}

void from_json(const json& j, RunConfig& cfg) {
  if (!j.is_object()) {
    throw std::invalid_argument("config must be a JSON object");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    if (k == "subcommand") v.get_to(cfg.subcommand);
    else if (k == "c") v.get_to(cfg.c);
    else if (k == "alpha") v.get_to(cfg.alpha);
    else if (k == "tol") v.get_to(cfg.tol);
    else if (k == "x_max") v.get_to(cfg.x_max);
    else if (k == "T") v.get_to(cfg.T);
    else if (k == "output") v.get_to(cfg.output);
    else if (k == "format") v.get_to(cfg.format);
    else if (k == "seed") v.get_to(cfg.seed);
    else if (k == "budget") v.get_to(cfg.budget);
    else if (k == "id") v.get_to(cfg.id);
    else if (k == "spacing") v.get_to(cfg.spacing);
    else if (k == "grid") v.get_to(cfg.grid);
    else if (k == "vary") v.get_to(cfg.vary);
    else if (k == "bump_center") v.get_to(cfg.bump_center);
    else if (k == "bump_radius") v.get_to(cfg.bump_radius);
    else throw std::invalid_argument("unknown config key: " + k);
  }
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json cvec_json(const CVec3& v) {
  json a = json::array();
  for (const Complex& z : v) {
    a.push_back(json::array({z.real(), z.imag()}));
  }
  return a;
}

json constants_json(const LimitConstants& lc) {
  json phi_defined = json::array();
  for (bool b : lc.phi_defined) {
    phi_defined.push_back(b);
  }
  return json{{"route", lc.route},       {"B", vec_json(lc.B)},
              {"W", cvec_json(lc.W)},    {"rho", vec_json(lc.rho)},
              {"phi", vec_json(lc.phi)}, {"phi_defined", phi_defined},
              {"err_est", lc.err_est},   {"x_used", lc.x_used},
              {"degraded", lc.degraded}, {"iterations", lc.iterations},
              {"cross_check", lc.cross_check}};
}

json geometry_json(const CircleGeom& g) {
  return json{{"B_plus", vec_json(g.B_plus)},
              {"B_minus", vec_json(g.B_minus)},
              {"angle_normals", g.angle_normals},
              {"angle_circles", g.angle_circles}};
}

json stats_json(const TraceStats& s, double x_max) {
  return json{{"x_max", x_max},   {"steps", s.steps}, {"rejected", s.rejected}, {"rhs_evals", s.rhs_evals},
              {"max_defect", s.max_defect}};
}

// Output sink: stdout, or a temporary file renamed into place on success.
void emit(std::ostream& out, const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(out);
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) {
      throw std::runtime_error("cannot open " + tmp.string());
    }
    body(f);
    if (!f) {
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, target);
}

void emit_json(std::ostream& out, const std::string& path, const json& j) {
  emit(out, path, [&j](std::ostream& os) { os << j.dump(2) << '\n'; });
}

std::string format_or(const RunConfig& cfg, const std::string& fallback, std::initializer_list<const char*> allowed) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  for (const char* a : allowed) {
    if (f == a) {
      return f;
    }
  }
  throw DomainError("format '" + f + "' not supported by " + cfg.subcommand);
}

json config_summary(const RunConfig& cfg, const Params& p) {
  return json{{"c", p.c}, {"alpha", p.alpha}, {"beta", p.beta}, {"tol", cfg.tol}};
}

int cmd_integrate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Params p = make_params(cfg.c, cfg.alpha);
  const std::string fmt = format_or(cfg, "csv", {"csv", "json", "bin"});
  const double x_max = cfg.x_max > 0.0 ? cfg.x_max : truncation_point(p, cfg.tol).x;
  IntegrateOptions opt;
  opt.tol = cfg.tol;
  opt.budget = cfg.budget;
  if (!(x_max > 0.0 && x_max <= kTruncationCap)) {
    throw DomainError("x_max must be in (0, 12]");
  }
  if (!(cfg.tol >= 1e-13 && cfg.tol <= 1e-6)) {
    throw DomainError("tol must be in [1e-13, 1e-6]");
  }
  if (!(cfg.spacing > 0.0)) {
    throw DomainError("spacing must be positive");
  }
  const Trace trace = integrate(p, initial_state(), x_max, opt);
  if (fmt == "csv") {
    emit(out, cfg.output, [&](std::ostream& os) { write_trace_csv(os, trace, cfg.spacing); });
  } else if (fmt == "bin") {
    emit(out, cfg.output, [&](std::ostream& os) { write_trace_binary(os, trace, cfg.spacing); });
  } else {
    std::ostringstream csv;
    write_trace_csv(csv, trace, cfg.spacing);
    json rows = json::array();
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      json row = json::array();
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) {
        row.push_back(std::stod(cell));
      }
      rows.push_back(row);
    }
    json j{{"config", config_summary(cfg, p)},
           {"stats", stats_json(trace.stats(), x_max)},
           {"columns", {"x", "m1", "m2", "m3", "n1", "n2", "n3", "b1", "b2", "b3", "psi"}},
           {"rows", rows}};
    emit_json(out, cfg.output, j);
  }
  const TraceStats& s = trace.stats();
  err << "steps " << s.steps << " rejected " << s.rejected << " rhs_evals " << s.rhs_evals << " max_defect "
      << num(s.max_defect) << " x_max " << num(x_max) << '\n';
  return kExitOk;
}

int cmd_constants(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Params p = make_params(cfg.c, cfg.alpha);
  format_or(cfg, "json", {"json"});
  const ConstantsRun run = compute_constants(p, cfg.tol, cfg.x_max, cfg.budget);
  const IdentityReport id = identity_suite(run.matching);
  json checks = json::array();
  for (const IdentityCheck& c : id.checks) {
    checks.push_back({{"name", c.name}, {"defect", c.defect}, {"pass", c.pass}});
  }
  json j{{"config", config_summary(cfg, p)},
         {"x_choice",
          {{"x", run.choice.x},
           {"err_est", run.choice.err_est},
           {"projected_cost", run.choice.projected_cost},
           {"degraded", run.choice.degraded}}},
         {"stats", stats_json(run.stats, run.trace->x_max())},
         {"matching", constants_json(run.matching)},
         {"quadrature", constants_json(run.quadrature)},
         {"identities", {{"threshold", id.threshold}, {"max_defect", id.max_defect}, {"pass", id.pass}, {"checks", checks}}},
         {"geometry", geometry_json(build_geometry(run.matching))}};
  emit_json(out, cfg.output, j);
  if (!id.pass) {
    for (const IdentityCheck& c : id.checks) {
      if (!c.pass) {
        err << "identity failed: " << c.name << " defect " << num(c.defect) << '\n';
      }
    }
    return kExitVerification;
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Params p = make_params(cfg.c, cfg.alpha);
  format_or(cfg, "json", {"json"});
  VerifyOptions opt;
  opt.tol = cfg.tol;
  opt.x_max = cfg.x_max;
  opt.budget = cfg.budget;
  opt.seed = cfg.seed;
  const VerifyReport r = verify_all(p, opt);
  json checks = json::array();
  for (const CheckResult& c : r.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"max_ratio", c.max_ratio}, {"note", c.note}});
  }
  json j{{"config", config_summary(cfg, p)},
         {"seed", cfg.seed},
         {"x_max", r.x_max},
         {"B", vec_json(r.constants.B)},
         {"err_est", r.constants.err_est},
         {"geometry", geometry_json(r.geometry)},
         {"pass", r.pass},
         {"checks", checks}};
  emit_json(out, cfg.output, j);
  if (!r.pass) {
    for (const CheckResult& c : r.checks) {
      if (!c.pass) {
        err << "check failed: " << c.name << " (ratio " << num(c.max_ratio) << ")" << '\n';
      }
    }
    return kExitVerification;
  }
  return kExitOk;
}

// Rows of selected trace columns on [0, X] or [-X, X] at the given spacing.
void write_rows(std::ostream& os, const Trace& trace, double spacing, bool symmetric,
                const std::vector<std::string>& names, const std::function<std::vector<double>(const Frame&)>& pick) {
  os << "x";
  for (const std::string& n : names) {
    os << ',' << n;
  }
  os << '\n';
  std::vector<std::pair<double, Frame>> pos;
  TraceCursor cur(trace);
  const double X = trace.x_max();
  const auto n = static_cast<std::size_t>(std::floor(X / spacing + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = std::min(static_cast<double>(i) * spacing, X);
    pos.emplace_back(x, cur.at(x).frame);
  }
  if (pos.back().first < X) {
    pos.emplace_back(X, cur.at(X).frame);
  }
  auto line = [&os, &pick](double x, const Frame& f) {
    os << num(x);
    for (double v : pick(f)) {
      os << ',' << num(v);
    }
    os << '\n';
  };
  if (symmetric) {
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
      if (it->first > 0.0) {
        line(-it->first, reflect(it->second));
      }
    }
  }
  for (const auto& [x, f] : pos) {
    line(x, f);
  }
}

std::string sidecar_path(const std::string& output) { return output + ".json"; }

int cmd_figures(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.id < 1 || cfg.id > 4) {
    throw DomainError("figure id must be 1, 2, 3 or 4");
  }
  format_or(cfg, "csv", {"csv"});
  if (cfg.output.empty()) {
    throw DomainError("figures needs --output for the data file (the sidecar goes next to it)");
  }
  const Params p = make_params(cfg.c, cfg.alpha);
  const ConstantsRun run = compute_constants(p, cfg.tol, cfg.x_max, cfg.budget);
  const Trace& trace = *run.trace;
  const CircleGeom g = build_geometry(run.matching);
  json side{{"figure", cfg.id},
            {"config", config_summary(cfg, p)},
            {"x_max", trace.x_max()},
            {"B", vec_json(run.matching.B)},
            {"err_est", run.matching.err_est},
            {"geometry", geometry_json(g)}};
  const auto m_cols = [](const Frame& f) { return std::vector<double>{f.m[0], f.m[1], f.m[2]}; };
  switch (cfg.id) {
    case 1: {
      emit(out, cfg.output, [&](std::ostream& os) {
        write_rows(os, trace, cfg.spacing, true, {"m1", "m2", "m3"}, m_cols);
      });
      // The limit circles C+ and C-, as unit vectors orthogonal to B+ and B-.
      const std::string circles = cfg.output + ".circles.csv";
      emit(out, circles, [&](std::ostream& os) {
        os << "theta,cp1,cp2,cp3,cm1,cm2,cm3\n";
        auto basis = [](const Vec3& nv) {
          const Vec3 seed = std::abs(nv[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
          Vec3 u = cross(nv, seed);
          u = (1.0 / norm(u)) * u;
          return std::pair{u, cross(nv, u)};
        };
        const auto [up, vp] = basis(g.B_plus);
        const auto [um, vm] = basis(g.B_minus);
        for (int i = 0; i <= 360; ++i) {
          const double th = 2.0 * std::numbers::pi * i / 360.0;
          const Vec3 a = std::cos(th) * up + std::sin(th) * vp;
          const Vec3 b = std::cos(th) * um + std::sin(th) * vm;
          os << num(th) << ',' << num(a[0]) << ',' << num(a[1]) << ',' << num(a[2]) << ',' << num(b[0]) << ','
             << num(b[1]) << ',' << num(b[2]) << '\n';
        }
      });
      side["circles_file"] = std::filesystem::path(circles).filename().string();
      side["angle_convention"] = "angle_normals = arccos(1 - 2 B1^2); angle_circles = pi - angle_normals";
      break;
    }
    case 2:
      emit(out, cfg.output, [&](std::ostream& os) {
        write_rows(os, trace, cfg.spacing, false, {"m1", "n1", "b1"},
                   [](const Frame& f) { return std::vector<double>{f.m[0], f.n[0], f.b[0]}; });
      });
      break;
    case 3: {
      emit(out, cfg.output, [&](std::ostream& os) {
        write_rows(os, trace, cfg.spacing, false, {"m1", "b1"},
                   [](const Frame& f) { return std::vector<double>{f.m[0], f.b[0]}; });
      });
      // Range of b1 on [8.5, x_max], where the profile has settled.
      double lo = 1.0;
      double hi = -1.0;
      TraceCursor cur(trace);
      for (double x = 8.5; x <= trace.x_max(); x += 0.01) {
        const double b1 = cur.at(x).frame.b[0];
        lo = std::min(lo, b1);
        hi = std::max(hi, b1);
      }
      if (trace.x_max() >= 8.5) {
        side["b1_range_beyond_8_5"] = json::array({lo, hi});
      }
      break;
    }
    case 4:
      emit(out, cfg.output, [&](std::ostream& os) {
        write_rows(os, trace, cfg.spacing, true, {"m1", "m2", "m3"}, m_cols);
      });
      break;
  }
  emit_json(out, sidecar_path(cfg.output), side);
  err << "figure " << cfg.id << " written to " << cfg.output << '\n';
  return kExitOk;
}

std::vector<double> grid_or(const RunConfig& cfg, std::vector<double> fallback) {
  return cfg.grid.empty() ? fallback : cfg.grid;
}

int cmd_scan_angle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string fmt = format_or(cfg, "csv", {"csv", "json"});
  AngleScan s;
  if (cfg.vary == "c") {
    s = angle_scan_c(cfg.alpha, grid_or(cfg, {1.0, 2.0, 4.0}), cfg.tol, cfg.budget);
  } else if (cfg.vary == "alpha") {
    s = angle_scan_alpha(cfg.c, grid_or(cfg, {0.5, 0.8, 0.95}), cfg.tol, cfg.budget);
  } else {
    throw DomainError("--vary must be c or alpha");
  }
  if (fmt == "csv") {
    emit(out, cfg.output, [&](std::ostream& os) {
      os << "c,alpha,B1,angle_normals,angle_circles,err_est,degraded\n";
      for (const AngleRow& r : s.rows) {
        os << num(r.c) << ',' << num(r.alpha) << ',' << num(r.B1) << ',' << num(r.angle_normals) << ','
           << num(r.angle_circles) << ',' << num(r.err_est) << ',' << (r.degraded ? 1 : 0) << '\n';
      }
    });
  } else {
    json rows = json::array();
    for (const AngleRow& r : s.rows) {
      rows.push_back({{"c", r.c},
                      {"alpha", r.alpha},
                      {"B1", r.B1},
                      {"angle_normals", r.angle_normals},
                      {"angle_circles", r.angle_circles},
                      {"err_est", r.err_est},
                      {"degraded", r.degraded}});
    }
    emit_json(out, cfg.output, json{{"vary", cfg.vary}, {"increasing", s.increasing}, {"rows", rows}});
  }
  err << "angle_circles " << (s.increasing ? "non-decreasing" : "not monotone") << " along the grid\n";
  return kExitOk;
}

int cmd_scan_continuity(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string fmt = format_or(cfg, "csv", {"csv", "json"});
  const auto rows = continuity_scan(cfg.alpha, grid_or(cfg, {0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5}), cfg.tol,
                                    cfg.budget);
  if (fmt == "csv") {
    emit(out, cfg.output, [&](std::ostream& os) {
      os << "c,B1,B2,B3,err_est,max_step,flagged\n";
      for (const ContinuityRow& r : rows) {
        os << num(r.c) << ',' << num(r.lc.B[0]) << ',' << num(r.lc.B[1]) << ',' << num(r.lc.B[2]) << ','
           << num(r.lc.err_est) << ',' << num(r.max_step_from_previous) << ',' << (r.flagged ? 1 : 0) << '\n';
      }
    });
  } else {
    json a = json::array();
    for (const ContinuityRow& r : rows) {
      a.push_back({{"c", r.c},
                   {"B", vec_json(r.lc.B)},
                   {"err_est", r.lc.err_est},
                   {"max_step", r.max_step_from_previous},
                   {"flagged", r.flagged}});
    }
    emit_json(out, cfg.output, json{{"alpha", cfg.alpha}, {"rows", a}});
  }
  err << rows.size() << " rows\n";
  return kExitOk;
}

int cmd_weak_limit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Params p = make_params(cfg.c, cfg.alpha);
  format_or(cfg, "json", {"json"});
  const ConstantsRun run = compute_constants(p, cfg.tol, cfg.x_max, cfg.budget);
  const ShrinkerSolution sol(run.trace, cfg.T);
  const TestFunction fn = make_bump(cfg.bump_center, cfg.bump_radius, {1.0, 0.0, 0.0});
  std::vector<double> ts;
  for (double tau : grid_or(cfg, {1e-1, 1e-2, 1e-3})) {
    if (!(tau > 0.0)) {
      throw DomainError("weak-limit grid holds T - t values, which must be positive");
    }
    ts.push_back(cfg.T - tau);
  }
  std::sort(ts.begin(), ts.end());
  const auto pts = weak_limit_scan(sol, run.matching, fn, ts);
  const double l1 = l1_norm(fn);
  json a = json::array();
  for (const WeakLimitPoint& w : pts) {
    a.push_back({{"t", w.t},
                 {"tau", w.tau},
                 {"value", w.value},
                 {"tail_bound", w.tail_bound},
                 {"window", w.window},
                 {"panels", w.panels}});
  }
  json j{{"config", config_summary(cfg, p)},
         {"T", cfg.T},
         {"x_max", run.trace->x_max()},
         {"test_function",
          {{"kind", "bump"},
           {"center", cfg.bump_center},
           {"radius", cfg.bump_radius},
           {"direction", json::array({1.0, 0.0, 0.0})},
           {"l1", l1},
           {"sup", fn.sup},
           {"lipschitz", fn.lip}}},
         {"points", a}};
  emit_json(out, cfg.output, j);
  err << "final |int m.phi| / ||phi||_1 = " << num(std::abs(pts.back().value) / l1) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-similar shrinkers of the 1-D Landau-Lifshitz-Gilbert equation", "llgss"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig flags;
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  auto bind = [&](CLI::Option* o, auto member) {
    overrides.emplace_back(o, [&flags, member](RunConfig& cfg) { cfg.*member = flags.*member; });
    return o;
  };
  bind(app.add_option("--c", flags.c, "curvature scale c > 0"), &RunConfig::c);
  bind(app.add_option("--alpha", flags.alpha, "Gilbert damping in (0, 1]"), &RunConfig::alpha);
  bind(app.add_option("--tol", flags.tol, "accuracy target (default 1e-10)"), &RunConfig::tol);
  bind(app.add_option("--x-max", flags.x_max, "profile range; automatic when omitted"), &RunConfig::x_max);
  bind(app.add_option("--T", flags.T, "blow-up time (default 0)"), &RunConfig::T);
  bind(app.add_option("--output", flags.output, "output path (stdout when omitted)"), &RunConfig::output);
  bind(app.add_option("--format", flags.format, "csv, json or bin"), &RunConfig::format);
  bind(app.add_option("--seed", flags.seed, "seed for randomized checks"), &RunConfig::seed);
  bind(app.add_option("--budget", flags.budget, "right-hand-side evaluation budget"), &RunConfig::budget);
  bind(app.add_option("--id", flags.id, "figure number 1-4"), &RunConfig::id);
  bind(app.add_option("--spacing", flags.spacing, "row spacing of trace data"), &RunConfig::spacing);
  bind(app.add_option("--grid", flags.grid, "comma-separated scan values")->delimiter(','), &RunConfig::grid);
  bind(app.add_option("--vary", flags.vary, "scan-angle: c or alpha"), &RunConfig::vary);
  bind(app.add_option("--bump-center", flags.bump_center, "weak-limit test bump center"), &RunConfig::bump_center);
  bind(app.add_option("--bump-radius", flags.bump_radius, "weak-limit test bump radius"), &RunConfig::bump_radius);
  app.add_option("--config", config_path, "JSON config file; flags take precedence");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"integrate", "integrate the profile and write the trace"},
      {"constants", "limit constants, identities and geometry as JSON"},
      {"verify", "all bound and identity checks as JSON"},
      {"figures", "data behind figures 1-4"},
      {"scan-angle", "angle between the limit circles along a grid"},
      {"scan-continuity", "limit normal along a grid of small c"},
      {"weak-limit", "integral of m against a bump as t approaches T"}};
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help);
  }

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) {
      args.emplace_back(argv[i]);
    }
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) {
        throw std::invalid_argument("cannot read config file " + config_path);
      }
      from_json(json::parse(f), cfg);
    }
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  for (auto& [opt, apply] : overrides) {
    if (opt->count() > 0) {
      apply(cfg);
    }
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  try {
    const std::string& s = cfg.subcommand;
    if (s == "integrate") return cmd_integrate(cfg, out, err);
    if (s == "constants") return cmd_constants(cfg, out, err);
    if (s == "verify") return cmd_verify(cfg, out, err);
    if (s == "figures") return cmd_figures(cfg, out, err);
    if (s == "scan-angle") return cmd_scan_angle(cfg, out, err);
    if (s == "scan-continuity") return cmd_scan_continuity(cfg, out, err);
    if (s == "weak-limit") return cmd_weak_limit(cfg, out, err);
    err << "unknown subcommand " << s << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace llgss
