#include "abflux/sweep.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>

#include <json.hpp>

#include "abflux/certify.hpp"
#include "abflux/constants.hpp"
#include "abflux/planar.hpp"
#include "abflux/ring.hpp"
#include "abflux/spectra.hpp"
#include "abflux/testfn.hpp"
#include "abflux/torus.hpp"

namespace abf {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_cell(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(V{}, c);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.columns.size(); ++j)
    out += (j ? "," : "") + csv_field(t.columns[j]);
  out += "\n";
  for (const auto& row : t.rows) {
    require(row.size() == t.columns.size(), Status::Internal, "row width mismatch");
    for (std::size_t j = 0; j < row.size(); ++j)
      out += (j ? "," : "") + csv_field(format_cell(row[j]));
    out += "\n";
  }
  return out;
}

std::string to_json(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    require(row.size() == t.columns.size(), Status::Internal, "row width mismatch");
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) {
      const Cell& c = row[j];
      auto& slot = obj[t.columns[j]];
      if (std::holds_alternative<double>(c)) {
        const double d = std::get<double>(c);
        // Round through the CSV text so both formats carry the same number.
        if (std::isfinite(d)) slot = std::strtod(format_double(d).c_str(), nullptr);
      } else if (std::holds_alternative<long long>(c)) {
        slot = std::get<long long>(c);
      } else if (std::holds_alternative<bool>(c)) {
        slot = std::get<bool>(c);
      } else if (std::holds_alternative<std::string>(c)) {
        slot = std::get<std::string>(c);
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(1) + "\n";
}

void write_table(const Table& t, OutputFormat f, const std::string& path) {
  const std::string text = f == OutputFormat::Csv ? to_csv(t) : to_json(t);
  if (path == "-") {
    std::cout << text << std::flush;
    require(static_cast<bool>(std::cout), Status::Io, "write to stdout failed");
    return;
  }
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  if (!o) fail(Status::Io, "cannot open " + path + " for writing: " + std::strerror(errno));
  o << text;
  o.close();
  if (!o) fail(Status::Io, "write to " + path + " failed");
}

namespace {

using Row = std::vector<Cell>;

const std::map<std::string, std::vector<std::string>>& schemas() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"constants",
       {"a_raw", "a", "p", "regime", "q", "ring_threshold", "sphere_ground", "torus_mode0",
        "torus_mode1", "torus_mode2", "lambda_star", "lambda_bullet", "status"}},
      {"spectrum",
       {"domain", "a", "index", "k", "l", "eigenvalue", "exact", "rel_error", "est_error",
        "status"}},
      {"ring-opt",
       {"a", "p", "regime", "param", "value", "symmetric", "gap_to_constant", "iters",
        "status"}},
      {"torus-opt",
       {"a", "p", "mu", "value", "ring_value", "ring_difference", "lower_bound",
        "x_variation", "shape", "iters", "status"}},
      {"planar-opt",
       {"a", "p", "lambda", "mu_closed", "mu_numeric", "lambda_star", "lambda_bullet",
        "k1_eig", "status"}},
      {"flow", {"t", "functional", "lp_norm", "drift"}},
      {"certify",
       {"id", "a", "p", "q", "seed", "lhs", "rhs", "margin", "quad_error", "verdict",
        "constant_source"}},
  };
  return s;
}

// Grid point tuple, evaluated by one task.
struct Point {
  double a = 0.0, p = 0.0, x = kNaN;
};

std::vector<Point> grid_points(const SweepConfig& c, const std::vector<double>& third) {
  std::vector<Point> pts;
  for (double a : c.a)
    for (double p : c.p) {
      if (third.empty())
        pts.push_back({a, p, kNaN});
      else
        for (double x : third) pts.push_back({a, p, x});
    }
  return pts;
}

struct PointRows {
  std::vector<Row> rows;
  std::string error;
};

Row error_row(std::size_t width, std::size_t status_col, std::vector<Cell> lead,
              const std::string& status = "error") {
  Row r(width);
  for (std::size_t j = 0; j < lead.size() && j < width; ++j) r[j] = lead[j];
  if (status_col < width) r[status_col] = status;
  return r;
}

SweepResult assemble(const std::vector<std::string>& cols, std::vector<PointRows> parts) {
  SweepResult res;
  res.table.columns = cols;
  for (auto& part : parts) {
    if (!part.error.empty()) {
      res.table.diagnostics.push_back("row " + std::to_string(res.table.rows.size()) + ": " +
                                      part.error);
      ++res.error_rows;
    }
    for (auto& r : part.rows) res.table.rows.push_back(std::move(r));
  }
  return res;
}

template <class F>
std::vector<PointRows> map_points(const SweepConfig& c, const std::vector<Point>& pts, F body) {
  std::function<PointRows(std::size_t)> task = [&](std::size_t i) {
    PointRows pr;
    try {
      pr.rows = body(pts[i]);
    } catch (const std::exception& e) {
      pr.error = e.what();
      pr.rows.clear();
    }
    return pr;
  };
  return ordered_map<PointRows>(pts.size(), c.workers, task);
}

SweepResult run_constants(const SweepConfig& c) {
  const auto& cols = schemas().at("constants");
  const auto pts = grid_points(c, {});
  auto parts = map_points(c, pts, [&](const Point& pt) {
    const FluxParams fp = FluxParams::make(pt.a, pt.p);
    const auto tm = torus_low_modes(fp.a);
    Cell ls, lb;
    if (pt.p > 2.0) {
      const auto th = planar_symmetry_thresholds(fp.a, pt.p);
      ls = th.lambda_star;
      lb = th.lambda_bullet;
    }
    return std::vector<Row>{{pt.a, fp.a, pt.p, std::string(regime_name(fp.regime)), fp.q,
                             ring_rigidity_threshold(fp), sphere2_ground(fp.a), tm[0], tm[1],
                             tm[2], ls, lb, std::string("ok")}};
  });
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!parts[i].error.empty())
      parts[i].rows = {error_row(cols.size(), cols.size() - 1, {pts[i].a, Cell{}, pts[i].p})};
  return assemble(cols, std::move(parts));
}

std::vector<double> exact_levels(const std::string& domain, double a, int count) {
  std::vector<double> v;
  const int kr = count + 4;
  if (domain == "S1") {
    for (int k = -kr; k <= kr; ++k) v.push_back((k - a) * (k - a));
  } else {
    for (int kx = -kr; kx <= kr; ++kx)
      for (int ky = -kr; ky <= kr; ++ky)
        v.push_back(double(kx) * kx + (ky - a) * (ky - a));
  }
  std::sort(v.begin(), v.end());
  v.resize(count);
  return v;
}

SweepResult run_spectrum(const SweepConfig& c) {
  const auto& cols = schemas().at("spectrum");
  const std::string& dom = c.domain;
  require(dom == "S1" || dom == "S2" || dom == "T2", Status::InvalidArgument,
          "domain must be S1, S2 or T2, got " + dom);
  std::vector<Point> pts;
  for (double a : c.a) pts.push_back({a, kNaN, kNaN});
  auto parts = map_points(c, pts, [&](const Point& pt) {
    const double a = normalize_flux(pt.a);
    GridSpec gs;
    OperatorSpec op;
    op.flux = a;
    if (dom == "S1") {
      gs.domain = Domain::RingS1;
      gs.n0 = c.resolution > 0 ? c.resolution : 256;
      op.kind = OperatorKind::RingMagnetic;
    } else if (dom == "T2") {
      gs.domain = Domain::TorusT2;
      gs.n0 = gs.n1 = c.resolution > 0 ? c.resolution : 32;
      op.kind = OperatorKind::TorusMagnetic;
    } else {
      gs.domain = Domain::IntervalZ;
      gs.n0 = c.resolution > 0 ? c.resolution : 200;
      op.kind = OperatorKind::Sphere2Magnetic;
      op.k_max = 5;
    }
    op.grid = build_grid(gs);
    const SpectrumResult sr = eigen_solve(op, c.count);
    std::vector<double> exact;
    if (dom != "S2") exact = exact_levels(dom, a, c.count);
    std::vector<Row> rows;
    for (int i = 0; i < static_cast<int>(sr.eigenvalues.size()); ++i) {
      Cell k, l;
      double ex;
      if (dom == "S2") {
        const ModeLabel& lab = sr.labels[i];
        k = static_cast<long long>(lab.k);
        l = static_cast<long long>(lab.l);
        const double m = lab.l + std::abs(lab.k - a);
        ex = m * (m + 1.0);
      } else {
        ex = exact[i];
      }
      const double ev = sr.eigenvalues[i];
      const double rel = std::abs(ev - ex) / std::max(std::abs(ex), 1e-300);
      rows.push_back({dom, a, static_cast<long long>(i), k, l, ev, ex,
                      ex == 0.0 ? std::abs(ev) : rel, sr.est_error[i], std::string("ok")});
    }
    return rows;
  });
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!parts[i].error.empty())
      parts[i].rows = {error_row(cols.size(), cols.size() - 1, {dom, pts[i].a})};
  return assemble(cols, std::move(parts));
}

SweepResult run_ring_opt(const SweepConfig& c) {
  const auto& cols = schemas().at("ring-opt");
  std::vector<Point> pts;
  for (double a : c.a)
    for (double p : c.p) {
      const auto& third = !c.param.empty() ? c.param : (p < 2.0 ? c.mu : c.lambda);
      require(!third.empty(), Status::InvalidArgument,
              "ring-opt needs param, mu (p < 2) or lambda (p > 2)");
      for (double x : third) pts.push_back({a, p, x});
    }
  auto parts = map_points(c, pts, [&](const Point& pt) {
    RingProblem rp;
    rp.fp = FluxParams::make(pt.a, pt.p);
    rp.param = pt.x;
    if (c.resolution > 0) rp.opts.n = c.resolution;
    if (c.tolerance > 0) rp.opts.min.grad_tol = c.tolerance;
    const OptimizationResult r = optimal_constant_ring(rp);
    return std::vector<Row>{{rp.fp.a, pt.p, std::string(regime_name(rp.fp.regime)), pt.x,
                             r.value, r.symmetric, r.gap_to_constant,
                             static_cast<long long>(r.iterations),
                             std::string(r.converged ? "ok" : "not_converged")}};
  });
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!parts[i].error.empty())
      parts[i].rows = {error_row(cols.size(), cols.size() - 1,
                                 {pts[i].a, pts[i].p, Cell{}, pts[i].x})};
  return assemble(cols, std::move(parts));
}

SweepResult run_torus_opt(const SweepConfig& c) {
  const auto& cols = schemas().at("torus-opt");
  require(!c.mu.empty(), Status::InvalidArgument, "torus-opt needs mu");
  const auto pts = grid_points(c, c.mu);
  auto parts = map_points(c, pts, [&](const Point& pt) {
    TorusProblem tp;
    tp.a_raw = pt.a;
    tp.p = pt.p;
    tp.mu = pt.x;
    if (c.resolution > 0) tp.opts.ny = c.resolution;
    if (c.tolerance > 0) tp.opts.min.grad_tol = c.tolerance;
    const TorusResult r = minimize_rayleigh_torus(tp);
    return std::vector<Row>{{normalize_flux(pt.a), pt.p, pt.x, r.opt.value, r.ring_value,
                             r.ring_difference, r.lower_bound, r.x_variation,
                             std::string(torus_shape_name(r.shape)),
                             static_cast<long long>(r.opt.iterations),
                             std::string(r.opt.converged ? "ok" : "not_converged")}};
  });
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!parts[i].error.empty())
      parts[i].rows = {error_row(cols.size(), cols.size() - 1,
                                 {pts[i].a, pts[i].p, pts[i].x})};
  return assemble(cols, std::move(parts));
}

SweepResult run_planar_opt(const SweepConfig& c) {
  const auto& cols = schemas().at("planar-opt");
  require(!c.lambda.empty(), Status::InvalidArgument, "planar-opt needs lambda");
  const auto pts = grid_points(c, c.lambda);
  auto parts = map_points(c, pts, [&](const Point& pt) {
    const HSParams hp = HSParams::make(pt.a, pt.p, pt.x);
    const auto th = planar_symmetry_thresholds(hp.a, hp.p);
    const PlanarMu mc = planar_mu_closed(hp.a, hp.p, hp.lambda);
    const RadialSolution rs = solve_radial_euler_lagrange(hp);
    K1Options ko;
    if (c.resolution > 0) ko.n = c.resolution;
    if (c.tolerance > 0) ko.tol = c.tolerance;
    const K1Result k1 = k1_second_variation(hp, ko);
    return std::vector<Row>{{hp.a, hp.p, hp.lambda, mc.value, rs.mu_numeric, th.lambda_star,
                             th.lambda_bullet, k1.eigenvalue, std::string("ok")}};
  });
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!parts[i].error.empty())
      parts[i].rows = {error_row(cols.size(), cols.size() - 1,
                                 {pts[i].a, pts[i].p, pts[i].x})};
  return assemble(cols, std::move(parts));
}

FlowScheme parse_scheme(const std::string& s) {
  for (FlowScheme f : {FlowScheme::ExactPower, FlowScheme::ImplicitPower,
                       FlowScheme::SemiImplicit})
    if (s == flow_scheme_name(f)) return f;
  fail(Status::InvalidArgument, "scheme must be exact, implicit or semi-implicit, got " + s);
}

SweepResult run_flow(const SweepConfig& c) {
  const auto& cols = schemas().at("flow");
  require(c.p.size() == 1 && c.lambda.size() <= 1, Status::InvalidArgument,
          "flow traces one trajectory: give a single p and at most one lambda");
  const double p = c.p[0];
  const double lambda = c.lambda.empty() ? 0.0 : c.lambda[0];
  FlowOptions fo;
  fo.t_end = c.t_end;
  fo.dt = c.dt;
  fo.scheme = parse_scheme(c.scheme);
  PointRows pr;
  try {
    GridSpec gs;
    gs.domain = Domain::TorusT2;
    gs.n0 = gs.n1 = c.resolution > 0 ? c.resolution : 32;
    const GridPtr g = build_grid(gs);
    const DiscreteField u0 =
        generate_test_function(g, Family::PositiveProfile, derive_seed(c.seed, 0));
    const FlowState st = run_bakry_emery_flow(u0, p, lambda, fo);
    const double lp0 = st.history.empty() ? 0.0 : st.history.front().lp_norm;
    for (const FlowSample& s : st.history)
      pr.rows.push_back({s.t, s.functional, s.lp_norm, std::abs(s.lp_norm - lp0)});
  } catch (const std::exception& e) {
    pr.rows = {Row(cols.size())};
    pr.error = e.what();
  }
  std::vector<PointRows> parts;
  parts.push_back(std::move(pr));
  return assemble(cols, std::move(parts));
}

SweepResult run_certify(const SweepConfig& c) {
  const auto& cols = schemas().at("certify");
  SuiteOptions so;
  for (const std::string& name : c.ids) {
    const auto id = parse_inequality(name);
    require(id.has_value(), Status::InvalidArgument, "unknown inequality id " + name);
    so.ids.push_back(*id);
  }
  for (int i = 0; i < c.seeds; ++i) so.seeds.push_back(c.seed + static_cast<std::uint64_t>(i));
  so.workers = c.workers;
  if (c.tolerance > 0) so.certify.solver_tol = c.tolerance;
  const auto reports = run_certificate_suite(so);
  SweepResult res;
  res.table.columns = cols;
  for (const CertificateReport& r : reports) {
    const long long seed = static_cast<long long>(r.seed);
    if (!r.ok) {
      res.table.diagnostics.push_back("row " + std::to_string(res.table.rows.size()) + ": " +
                                      inequality_name(r.id) + " seed " +
                                      std::to_string(r.seed) + ": " + r.error);
      ++res.error_rows;
      res.table.rows.push_back({std::string(inequality_name(r.id)), r.a, r.p, Cell{}, seed,
                                Cell{}, Cell{}, Cell{}, Cell{}, std::string("error"), Cell{}});
      continue;
    }
    if (r.verdict == Verdict::Violated) ++res.violated;
    res.table.rows.push_back({std::string(inequality_name(r.id)), r.a, r.p, r.q, seed, r.lhs,
                              r.rhs, r.margin, r.quad_error,
                              std::string(verdict_name(r.verdict)), r.constant_source});
  }
  return res;
}

}  // namespace

std::vector<std::string> subcommand_names() {
  return {"constants", "spectrum", "ring-opt", "torus-opt",
          "planar-opt", "flow",    "certify",  "sweep"};
}

std::vector<std::string> sweep_columns(const std::string& subcommand) {
  auto it = schemas().find(subcommand);
  require(it != schemas().end(), Status::InvalidArgument,
          "no fixed columns for subcommand " + subcommand);
  return it->second;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  std::string sub = cfg.subcommand;
  if (sub == "sweep") {
    require(cfg.task != "sweep", Status::InvalidArgument, "sweep task cannot be sweep");
    sub = cfg.task;
  }
  if (sub == "constants") return run_constants(cfg);
  if (sub == "spectrum") return run_spectrum(cfg);
  if (sub == "ring-opt") return run_ring_opt(cfg);
  if (sub == "torus-opt") return run_torus_opt(cfg);
  if (sub == "planar-opt") return run_planar_opt(cfg);
  if (sub == "flow") return run_flow(cfg);
  if (sub == "certify") return run_certify(cfg);
  fail(Status::InvalidArgument, "unknown subcommand " + sub);
}

}  // namespace abf
