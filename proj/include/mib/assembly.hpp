#pragma once

#include <functional>
#include <vector>

#include "mib/fictitious.hpp"
#include "mib/functional.hpp"
#include "mib/grid.hpp"
#include "mib/materials.hpp"

namespace mib {

struct StencilEntry {
  Index3 offset;  // each component in {-1,0,1}; <=2 nonzero, diagonal in one plane
  int comp = 0;
  double coef = 0.0;
};

struct PdeStencil {
  Index3 node{};
  int eq = 0;
  std::vector<StencilEntry> entries;
};

// Standard second-order central discretization of the spelled-out governing
// equations at one interior node, coefficients evaluated from the node's own
// phase. Second derivatives (1,-2,1)/h^2, cross derivatives by the four-corner
// formula /(4 h_a h_b), first derivatives (variable-coefficient terms) by
// centered differences /(2h).
inline PdeStencil pde_stencil(const Grid& g, const Index3& node, int eq,
                              const MaterialField& mat, const PhaseMap& pm) {
  PdeStencil st;
  st.node = node;
  st.eq = eq;
  Vec3 x = g.node(node);
  MaterialPoint mp = mat.evaluate(x, pm.at(g.lin(node)));

  auto add = [&](Index3 off, int comp, double coef) {
    if (coef != 0.0) st.entries.push_back({off, comp, coef});
  };

  // Central second derivatives of u_eq: (lambda + 2 mu) along eq, mu otherwise.
  for (int d = 0; d < 3; ++d) {
    double c = (d == eq ? mp.M : mp.mu) / (g.h[d] * g.h[d]);
    Index3 off{0, 0, 0};
    add(off, eq, -2.0 * c);
    off[d] = 1;
    add(off, eq, c);
    off[d] = -1;
    add(off, eq, c);
  }

  // Cross terms (lambda + mu) d2 u_d / (dx_eq dx_d).
  for (int d = 0; d < 3; ++d) {
    if (d == eq) continue;
    double c = (mp.lambda + mp.mu) / (4.0 * g.h[eq] * g.h[d]);
    for (int se : {-1, 1})
      for (int sd : {-1, 1}) {
        Index3 off{0, 0, 0};
        off[eq] = se;
        off[d] = sd;
        add(off, d, c * se * sd);
      }
  }

  // Variable-coefficient first-derivative terms.
  auto add_first = [&](int comp, int dir, double coef) {
    if (coef == 0.0) return;
    double c = coef / (2.0 * g.h[dir]);
    Index3 off{0, 0, 0};
    off[dir] = 1;
    add(off, comp, c);
    off[dir] = -1;
    add(off, comp, -c);
  };
  for (int d = 0; d < 3; ++d) add_first(d, d, mp.grad_lambda[eq]);  // div u
  add_first(eq, eq, 2.0 * mp.grad_mu[eq]);
  for (int d = 0; d < 3; ++d) {
    if (d == eq) continue;
    add_first(eq, d, mp.grad_mu[d]);
    add_first(d, eq, mp.grad_mu[d]);
  }
  return st;
}

// Row-compressed 3N x 3N system, unknowns node-major and component-minor
// (index 3*lin + comp).
struct SparseSystem {
  int64_t dim = 0;
  std::vector<int64_t> row_ptr;
  std::vector<int64_t> cols;
  std::vector<double> vals;
  std::vector<double> rhs;

  void multiply(const std::vector<double>& x, std::vector<double>& y) const {
    for (int64_t r = 0; r < dim; ++r) {
      double s = 0.0;
      for (int64_t t = row_ptr[size_t(r)]; t < row_ptr[size_t(r) + 1]; ++t)
        s += vals[size_t(t)] * x[size_t(cols[size_t(t)])];
      y[size_t(r)] = s;
    }
  }
};

// Expand interface-crossing references of a stencil through the fictitious
// table. Axis offsets use the central context, diagonal offsets the cross
// context. Constants move to the right-hand side with opposite sign.
inline void substitute_fictitious(const Grid& g, const PhaseMap& pm,
                                  const FictitiousTable& table,
                                  const PdeStencil& st,
                                  std::vector<std::pair<int64_t, double>>& row,
                                  double& rhs_delta) {
  Phase center = pm.at(g.lin(st.node));
  for (const StencilEntry& e : st.entries) {
    Index3 q{st.node[0] + e.offset[0], st.node[1] + e.offset[1],
             st.node[2] + e.offset[2]};
    int64_t ql = g.lin(q);
    if (pm.at(ql) == center) {
      row.emplace_back(3 * ql + e.comp, e.coef);
      continue;
    }
    int nz = int(e.offset[0] != 0) + int(e.offset[1] != 0) + int(e.offset[2] != 0);
    int ctx;
    if (nz == 1) {
      int axis = e.offset[0] != 0 ? 0 : (e.offset[1] != 0 ? 1 : 2);
      ctx = ctx_central(axis);
    } else {
      int a0 = e.offset[0] != 0 ? 0 : 1;
      int a1 = e.offset[2] != 0 ? 2 : 1;
      ctx = ctx_cross(plane_of(a0, a1));
    }
    const FictitiousEntry* fe = table.find(ql, ctx);
    if (!fe)
      throw MissingFictitious("missing fictitious value at node (" +
                              std::to_string(q[0]) + "," + std::to_string(q[1]) +
                              "," + std::to_string(q[2]) + ") ctx " +
                              std::to_string(ctx));
    const Functional& f = fe->comp[size_t(e.comp)];
    for (auto& [key, w] : f.terms) row.emplace_back(key, e.coef * w);
    rhs_delta -= e.coef * f.constant;
  }
}

// forcing(x, eq, phase) -> F_eq; boundary(x, comp, phase) -> Dirichlet value.
using ForcingFn = std::function<double(const Vec3&, int, Phase)>;
using BoundaryFn = std::function<double(const Vec3&, int, Phase)>;

inline SparseSystem assemble_system(const Grid& g, const PhaseMap& pm,
                                    const MaterialField& mat,
                                    const FictitiousTable& table,
                                    const ForcingFn& forcing,
                                    const BoundaryFn& boundary) {
  SparseSystem sys;
  sys.dim = 3 * g.num_nodes();
  sys.row_ptr.assign(size_t(sys.dim) + 1, 0);
  sys.rhs.assign(size_t(sys.dim), 0.0);

  std::vector<std::vector<std::pair<int64_t, double>>> rows(size_t(sys.dim));

  for (int k = 0; k < g.n[2]; ++k)
    for (int jj = 0; jj < g.n[1]; ++jj)
      for (int i = 0; i < g.n[0]; ++i) {
        Index3 id{i, jj, k};
        int64_t lin = g.lin(id);
        Vec3 x = g.node(id);
        if (g.on_boundary(id)) {
          for (int comp = 0; comp < 3; ++comp) {
            int64_t r = 3 * lin + comp;
            rows[size_t(r)].emplace_back(r, 1.0);
            sys.rhs[size_t(r)] = boundary(x, comp, pm.at(lin));
          }
          continue;
        }
        for (int eq = 0; eq < 3; ++eq) {
          int64_t r = 3 * lin + eq;
          PdeStencil st = pde_stencil(g, id, eq, mat, pm);
          double rhs_delta = 0.0;
          substitute_fictitious(g, pm, table, st, rows[size_t(r)], rhs_delta);
          sys.rhs[size_t(r)] = -forcing(x, eq, pm.at(lin)) + rhs_delta;
        }
      }

  // Compress: sort and merge duplicate columns per row.
  size_t nnz = 0;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t out = 0;
    for (size_t t = 0; t < row.size();) {
      int64_t col = row[t].first;
      double v = 0.0;
      while (t < row.size() && row[t].first == col) v += row[t++].second;
      row[out++] = {col, v};
    }
    row.resize(out);
    nnz += out;
  }
  sys.cols.reserve(nnz);
  sys.vals.reserve(nnz);
  for (int64_t r = 0; r < sys.dim; ++r) {
    sys.row_ptr[size_t(r)] = int64_t(sys.cols.size());
    for (auto& [col, v] : rows[size_t(r)]) {
      sys.cols.push_back(col);
      sys.vals.push_back(v);
    }
  }
  sys.row_ptr[size_t(sys.dim)] = int64_t(sys.cols.size());
  return sys;
}

}  // namespace mib
