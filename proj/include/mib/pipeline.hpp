#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mib/assembly.hpp"
#include "mib/intersections.hpp"
#include "mib/problems.hpp"
#include "mib/solver.hpp"

namespace mib {

struct ErrorReport {
  int example = 0, case_id = 1;
  Index3 n{0, 0, 0};
  double h = 0.0;  // largest spacing
  std::array<double, 3> linf{}, l2{};
  std::array<double, 3> ord_linf{}, ord_l2{};
  bool has_order = false;
  int64_t iters = 0;
  double residual = 0.0;

  bool operator==(const ErrorReport& o) const {
    return example == o.example && case_id == o.case_id && n == o.n && h == o.h &&
           linf == o.linf && l2 == o.l2 && ord_linf == o.ord_linf &&
           ord_l2 == o.ord_l2 && has_order == o.has_order && iters == o.iters &&
           residual == o.residual;
  }
};

inline double convergence_order(double error_coarse, double error_fine) {
  if (!(error_coarse > 0.0) || !(error_fine > 0.0))
    throw NonpositiveError("convergence_order: errors must be positive");
  return std::log2(error_coarse / error_fine);
}

// L-infinity is the max over all grid points; L2 uses the 1/(nx ny nz)
// normalization, per component.
inline void error_norms(const std::vector<double>& numeric,
                        const std::vector<double>& exact, const Grid& g,
                        std::array<double, 3>& linf, std::array<double, 3>& l2) {
  if (numeric.size() != exact.size() ||
      numeric.size() != size_t(3 * g.num_nodes()))
    throw ShapeMismatch("error_norms: field sizes disagree with grid");
  linf = {0.0, 0.0, 0.0};
  l2 = {0.0, 0.0, 0.0};
  int64_t N = g.num_nodes();
  for (int64_t l = 0; l < N; ++l)
    for (int c = 0; c < 3; ++c) {
      double d = std::fabs(numeric[size_t(3 * l + c)] - exact[size_t(3 * l + c)]);
      linf[size_t(c)] = std::max(linf[size_t(c)], d);
      l2[size_t(c)] += d * d;
    }
  for (int c = 0; c < 3; ++c) l2[size_t(c)] = std::sqrt(l2[size_t(c)] / double(N));
}

struct SolveResult {
  Grid grid;
  PhaseMap phases;
  std::vector<double> numeric;  // 3N, component-minor
  std::vector<double> exact;
  ErrorReport errors;
  SolveReport report;
  int cross_passes = 0;
};

struct SolveOptions {
  double tol = 1e-10;
  int64_t max_iterations = 0;  // 0 = 10 * dimension
};

inline SolveResult run_solve(const ManufacturedProblem& p, const Index3& counts,
                             const SolveOptions& opt = {}) {
  SolveResult res;
  res.grid = build_grid(p.lo, p.hi, counts);
  const Grid& g = res.grid;
  res.phases = classify_nodes(g, p.shape);
  IntersectionSet isecs = find_intersections(g, p.shape, res.phases);

  JumpProvider jumps = [&p](const Vec3& x, const LocalFrame& fr) {
    return p.jump_data(x, fr);
  };
  FictitiousTable table =
      build_fictitious_table(g, res.phases, isecs, p.materials, jumps);
  res.cross_passes = table.cross_passes;

  ForcingFn forcing = [&p](const Vec3& x, int eq, Phase ph) {
    return p.forcing(x, eq, ph);
  };
  BoundaryFn boundary = [&p](const Vec3& x, int comp, Phase ph) {
    return p.exact(x, comp, ph);
  };
  SparseSystem sys =
      assemble_system(g, res.phases, p.materials, table, forcing, boundary);

  auto diag = jacobi_preconditioner(sys);
  int64_t max_it = opt.max_iterations > 0 ? opt.max_iterations : 10 * sys.dim;
  auto [x, rep] = bicgstab(sys, diag, opt.tol, max_it);
  res.numeric = std::move(x);
  res.report = rep;

  res.exact.resize(size_t(sys.dim));
  for (int64_t l = 0; l < g.num_nodes(); ++l) {
    Vec3 pos = g.node(g.unlin(l));
    Phase ph = res.phases.at(l);
    for (int c = 0; c < 3; ++c)
      res.exact[size_t(3 * l + c)] = p.exact(pos, c, ph);
  }

  res.errors.example = p.example;
  res.errors.case_id = p.case_id;
  res.errors.n = counts;
  res.errors.h = std::max({g.h[0], g.h[1], g.h[2]});
  error_norms(res.numeric, res.exact, g, res.errors.linf, res.errors.l2);
  res.errors.iters = rep.iterations;
  res.errors.residual = rep.rel_residual;
  return res;
}

inline void attach_orders(ErrorReport& fine, const ErrorReport& coarse) {
  fine.has_order = true;
  for (int c = 0; c < 3; ++c) {
    fine.ord_linf[size_t(c)] =
        convergence_order(coarse.linf[size_t(c)], fine.linf[size_t(c)]);
    fine.ord_l2[size_t(c)] =
        convergence_order(coarse.l2[size_t(c)], fine.l2[size_t(c)]);
  }
}

// ------------------------------------------------------------------ files

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_errors_csv(const std::vector<ErrorReport>& reports,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_errors_csv: cannot open " + path);
  out << "example,case,nx,ny,nz,h,linf_u1,ord_u1,linf_u2,ord_u2,linf_u3,ord_u3,"
         "l2_u1,ord2_u1,l2_u2,ord2_u2,l2_u3,ord2_u3,iters,residual\n";
  for (const auto& r : reports) {
    out << r.example << ',' << r.case_id << ',' << r.n[0] << ',' << r.n[1] << ','
        << r.n[2] << ',' << format_double(r.h);
    for (int c = 0; c < 3; ++c) {
      out << ',' << format_double(r.linf[size_t(c)]) << ',';
      if (r.has_order) out << format_double(r.ord_linf[size_t(c)]);
    }
    for (int c = 0; c < 3; ++c) {
      out << ',' << format_double(r.l2[size_t(c)]) << ',';
      if (r.has_order) out << format_double(r.ord_l2[size_t(c)]);
    }
    out << ',' << r.iters << ',' << format_double(r.residual) << '\n';
  }
  if (!out) throw IoError("write_errors_csv: write failed for " + path);
}

inline std::vector<ErrorReport> parse_errors_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("parse_errors_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("parse_errors_csv: empty file");
  std::vector<ErrorReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    while (f.size() < 20) f.push_back("");
    ErrorReport r;
    r.example = std::stoi(f[0]);
    r.case_id = std::stoi(f[1]);
    r.n = {std::stoi(f[2]), std::stoi(f[3]), std::stoi(f[4])};
    r.h = std::stod(f[5]);
    r.has_order = !f[7].empty();
    for (int c = 0; c < 3; ++c) {
      r.linf[size_t(c)] = std::stod(f[6 + 2 * c]);
      if (r.has_order) r.ord_linf[size_t(c)] = std::stod(f[7 + 2 * c]);
      r.l2[size_t(c)] = std::stod(f[12 + 2 * c]);
      if (r.has_order) r.ord_l2[size_t(c)] = std::stod(f[13 + 2 * c]);
    }
    r.iters = std::stoll(f[18]);
    r.residual = std::stod(f[19]);
    out.push_back(r);
  }
  return out;
}

// Legacy ASCII STRUCTURED_POINTS with point scalars u1,u2,u3,err1,err2,err3.
inline void write_field_vtk(const SolveResult& res, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("write_field_vtk: cannot open " + path);
  const Grid& g = res.grid;
  int64_t N = g.num_nodes();
  out << "# vtk DataFile Version 3.0\n";
  out << "displacement and error fields\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.n[0] << ' ' << g.n[1] << ' ' << g.n[2] << '\n';
  out << "ORIGIN " << format_double(g.lo.x) << ' ' << format_double(g.lo.y) << ' '
      << format_double(g.lo.z) << '\n';
  out << "SPACING " << format_double(g.h.x) << ' ' << format_double(g.h.y) << ' '
      << format_double(g.h.z) << '\n';
  out << "POINT_DATA " << N << '\n';
  auto scalars = [&](const std::string& name, auto&& value) {
    out << "SCALARS " << name << " double\n";
    out << "LOOKUP_TABLE default\n";
    for (int64_t l = 0; l < N; ++l) out << format_double(value(l)) << '\n';
  };
  for (int c = 0; c < 3; ++c)
    scalars("u" + std::to_string(c + 1),
            [&](int64_t l) { return res.numeric[size_t(3 * l + c)]; });
  for (int c = 0; c < 3; ++c)
    scalars("err" + std::to_string(c + 1), [&](int64_t l) {
      return res.numeric[size_t(3 * l + c)] - res.exact[size_t(3 * l + c)];
    });
  if (!out) throw IoError("write_field_vtk: write failed for " + path);
}

// key=value overrides (domain bounds, solver tolerance, iteration cap).
struct Config {
  std::optional<double> domain_min[3], domain_max[3];
  std::optional<double> tol;
  std::optional<int64_t> max_iter;
};

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_config: cannot open " + path);
  Config cfg;
  std::string line;
  const char* axes = "xyz";
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) continue;
    bool matched = false;
    for (int d = 0; d < 3; ++d) {
      if (key == std::string("domain_min_") + axes[d]) {
        cfg.domain_min[d] = std::stod(val);
        matched = true;
      } else if (key == std::string("domain_max_") + axes[d]) {
        cfg.domain_max[d] = std::stod(val);
        matched = true;
      }
    }
    if (matched) continue;
    if (key == "tol")
      cfg.tol = std::stod(val);
    else if (key == "max_iter")
      cfg.max_iter = std::stoll(val);
    else
      throw IoError("load_config: unknown key '" + key + "'");
  }
  return cfg;
}

inline void apply_config(const Config& cfg, ManufacturedProblem& p,
                         SolveOptions& opt) {
  for (int d = 0; d < 3; ++d) {
    if (cfg.domain_min[d]) p.lo[d] = *cfg.domain_min[d];
    if (cfg.domain_max[d]) p.hi[d] = *cfg.domain_max[d];
  }
  if (cfg.tol) opt.tol = *cfg.tol;
  if (cfg.max_iter) opt.max_iterations = *cfg.max_iter;
}

}  // namespace mib
