#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "mib/dense.hpp"
#include "mib/functional.hpp"
#include "mib/grid.hpp"
#include "mib/intersections.hpp"
#include "mib/jump.hpp"
#include "mib/materials.hpp"
#include "mib/stencils.hpp"

namespace mib {

using JumpProvider = std::function<JumpData(const Vec3&, const LocalFrame&)>;

inline JumpProvider zero_jumps() {
  return [](const Vec3&, const LocalFrame&) { return JumpData{}; };
}

enum class Scheme : uint8_t {
  Central,
  SharpEdge,
  Disassociated,
  ExtrapolatedI,
  ExtrapolatedII,
  ExtrapolatedIII,
  NeighborCombination,
};

// Contexts a fictitious value is consumed in: one per central-difference
// direction, one per cross-derivative plane.
inline int ctx_central(int axis) { return axis; }
inline int ctx_cross(Plane p) { return 3 + int(p); }
inline bool ctx_is_central(int ctx) { return ctx < 3; }

// Fictitious values at a node always extend the solution from the other side
// of the interface, so one entry per (node, context) serves every consumer.
struct FictitiousEntry {
  std::array<Functional, 3> comp;
  double cond = 0.0;
  Scheme scheme = Scheme::Central;
  int pair_l = -1, pair_m = -1;  // elimination pair of the owning local solve
};

struct FictitiousTable {
  std::unordered_map<int64_t, FictitiousEntry> map;  // key = 6*node_lin + ctx
  int cross_passes = 0;

  static int64_t key(int64_t node_lin, int ctx) { return node_lin * 6 + ctx; }

  const FictitiousEntry* find(int64_t node_lin, int ctx) const {
    auto it = map.find(key(node_lin, ctx));
    return it == map.end() ? nullptr : &it->second;
  }
};

namespace detail {

struct SolvedNode {
  Index3 idx;
  Phase ext_side;  // side whose extension lives here = opposite(phase(idx))
};

// Stencil terms before component expansion: (node, unknown slot or -1, weight).
struct Proto {
  std::vector<std::tuple<int64_t, int, double>> entries;
};

struct LocalFunctional {
  std::vector<double> unk;
  Functional grid;
};

struct LocalEq {
  std::vector<double> unk;
  Functional rhs;
};

}  // namespace detail

class FictitiousBuilder {
 public:
  FictitiousBuilder(const Grid& g, const PhaseMap& pm, const IntersectionSet& is,
                    const MaterialField& mat, JumpProvider jumps)
      : g_(g), pm_(pm), isecs_(is), mat_(mat), jumps_(std::move(jumps)) {}

  FictitiousTable build() {
    FictitiousTable table;
    std::vector<std::pair<int64_t, int>> pending;  // (node lin, axis)

    for (int axis = 0; axis < 3; ++axis) central_pass(axis, table, pending);
    resolve_pending_central(table, pending);
    cross_pass(table);
    return table;
  }

  // Central pair solve at one intersection with a pinned elimination pair.
  // Exposed for property tests of the combined interface conditions.
  bool solve_central_pinned(const Intersection& isec, int l, int m,
                            FictitiousTable& table) {
    std::pair<int, int> pin{l, m};
    return solve_local(isec, nullptr, table, &pin);
  }

 private:
  const Grid& g_;
  const PhaseMap& pm_;
  const IntersectionSet& isecs_;
  const MaterialField& mat_;
  JumpProvider jumps_;

  Phase phase_at(const Index3& id) const { return pm_.at(g_.lin(id)); }

  // A fictitious value is required only when an interior node's stencil
  // actually references it across the interface. Irregular nodes at the
  // domain edge can lack consumers; those need no entry.
  bool central_needed(const Index3& q, int axis) const {
    for (int s : {-1, 1}) {
      Index3 p = q;
      p[axis] += s;
      if (!g_.in_bounds(p) || g_.on_boundary(p)) continue;
      if (phase_at(p) != phase_at(q)) return true;
    }
    return false;
  }

  bool cross_needed(const Index3& q, Plane plane) const {
    auto [a, b] = plane_axes(plane);
    for (int sa : {-1, 1})
      for (int sb : {-1, 1}) {
        Index3 p = q;
        p[a] += sa;
        p[b] += sb;
        if (!g_.in_bounds(p) || g_.on_boundary(p)) continue;
        if (phase_at(p) != phase_at(q)) return true;
      }
    return false;
  }

  // ---------------------------------------------------------------- central

  struct LocalCtx {
    int axis = 0;
    Index3 base{};  // any node on the meshline (fixes the other two indices)
    Vec3 isec_pos;
    std::vector<detail::SolvedNode> solved;

    int slot_for(const Index3& idx, Phase side) const {
      for (size_t s = 0; s < solved.size(); ++s)
        if (solved[s].idx == idx && solved[s].ext_side == side) return int(s);
      return -1;
    }
  };

  Index3 line_node(const LocalCtx& c, int m_index) const {
    Index3 id = c.base;
    id[c.axis] = m_index;
    return id;
  }

  detail::Proto line_proto(const LocalCtx& c, int run_start, int order,
                           Phase side) const {
    std::vector<double> coords(3);
    for (int p = 0; p < 3; ++p) coords[p] = g_.coord(c.axis, run_start + p);
    auto w = lagrange_weights(coords, c.isec_pos[c.axis], order);
    detail::Proto pr;
    for (int p = 0; p < 3; ++p) {
      Index3 id = line_node(c, run_start + p);
      pr.entries.emplace_back(g_.lin(id), c.slot_for(id, side), w[p]);
    }
    return pr;
  }

  struct Block {
    bool found = false;
    int level_start = 0, run_start = 0;
    double score = 0.0;
    int real_count = 0;
  };

  // One-sided 3x3 auxiliary block for the interfacial derivative of `side`
  // along axis d: three interpolation nodes along the meshline at each of
  // three levels along d. Nodes must be in-phase except at solved nodes, and
  // the block sits as close to the intersection as candidates allow.
  Block find_block(const LocalCtx& c, Phase side, int d) const {
    int j = c.base[c.axis];
    int kd = c.base[d];
    Block best;
    for (int q : {kd - 2, kd - 1, kd})
      for (int r : {j - 2, j - 1, j, j + 1}) {
        bool ok = true;
        double score = 0.0;
        int real = 0;
        for (int lv = 0; lv < 3 && ok; ++lv)
          for (int p = 0; p < 3 && ok; ++p) {
            Index3 id = c.base;
            id[d] = q + lv;
            id[c.axis] = r + p;
            if (!g_.in_bounds(id)) {
              ok = false;
              break;
            }
            if (phase_at(id) == side)
              ++real;
            else if (c.slot_for(id, side) < 0) {
              ok = false;
              break;
            }
            score += norm(g_.node(id) - c.isec_pos);
          }
        if (!ok) continue;
        if (!best.found || score < best.score - 1e-14 ||
            (std::fabs(score - best.score) <= 1e-14 &&
             (q < best.level_start ||
              (q == best.level_start && r < best.run_start)))) {
          best.found = true;
          best.level_start = q;
          best.run_start = r;
          best.score = score;
          best.real_count = real;
        }
      }
    return best;
  }

  detail::Proto block_proto(const LocalCtx& c, Phase side, int d,
                            const Block& blk) const {
    std::vector<double> lev(3), run(3);
    for (int i = 0; i < 3; ++i) {
      lev[i] = g_.coord(d, blk.level_start + i);
      run[i] = g_.coord(c.axis, blk.run_start + i);
    }
    auto wd = lagrange_weights(lev, c.isec_pos[d], 1);
    auto wm = lagrange_weights(run, c.isec_pos[c.axis], 0);
    detail::Proto pr;
    for (int lv = 0; lv < 3; ++lv)
      for (int p = 0; p < 3; ++p) {
        Index3 id = c.base;
        id[d] = blk.level_start + lv;
        id[c.axis] = blk.run_start + p;
        pr.entries.emplace_back(g_.lin(id), c.slot_for(id, side), wd[lv] * wm[p]);
      }
    return pr;
  }

  detail::LocalFunctional expand(const detail::Proto& pr, int comp,
                                 size_t n_unknowns) const {
    detail::LocalFunctional f;
    f.unk.assign(n_unknowns, 0.0);
    for (auto& [lin, slot, w] : pr.entries) {
      if (slot >= 0)
        f.unk[size_t(3 * slot + comp)] += w;
      else
        f.grid.add(3 * lin + comp, w);
    }
    return f;
  }

  struct SharpConfig {
    bool convex = false;  // conditions at the upper crossing, extra node below
    const Intersection* o2 = nullptr;
  };

  // Solve the 6x6 (central pair) or 9x9 (sharp-edge triple) local system and
  // record entries. Returns false when no elimination pair yields a
  // well-conditioned system.
  bool solve_local(const Intersection& o1, const SharpConfig* sharp,
                   FictitiousTable& table,
                   const std::pair<int, int>* pinned = nullptr) {
    const int axis = o1.axis;
    LocalCtx c;
    c.axis = axis;
    c.base = o1.lower;
    c.isec_pos = o1.position;

    Index3 A = o1.lower;
    Index3 B = A;
    B[axis] += 1;
    Phase pA = o1.lower_phase;
    Phase pB = opposite(pA);

    auto ext = [&](const Index3& id) {
      return detail::SolvedNode{id, opposite(phase_at(id))};
    };

    Index3 E{};
    if (sharp) {
      E = sharp->convex ? A : B;
      E[axis] += sharp->convex ? -1 : 1;
      if (!g_.in_bounds(E)) return false;
      c.solved = {ext(E), ext(A), ext(B)};
    } else {
      c.solved = {ext(A), ext(B)};
    }
    size_t nu = 3 * c.solved.size();

    // Meshline interpolation runs: side pA uses {j-1, j, j+1}, side pB uses
    // {j, j+1, j+2}; in the sharp cases the extra node replaces the
    // out-of-phase end.
    int j = A[axis];
    if (j - 1 < 0 || j + 2 >= g_.n[axis]) return false;
    if (!sharp) {
      Index3 lowA = line_node(c, j - 1), highB = line_node(c, j + 2);
      if (phase_at(lowA) != pA || phase_at(highB) != pB) return false;
    } else if (sharp->convex) {
      Index3 highB = line_node(c, j + 2);
      if (phase_at(highB) != pB) return false;
    } else {
      Index3 lowA = line_node(c, j - 1);
      if (phase_at(lowA) != pA) return false;
    }

    auto run_start = [&](Phase side) { return side == pA ? j - 1 : j; };

    // Availability of the four off-axis derivative sets.
    SetAvailability av;
    Block blocks[6];
    for (int s = 0; s < 6; ++s) {
      int d = set_axis(s);
      if (d == axis) continue;
      Phase side = set_is_plus(s) ? Phase::Plus : Phase::Minus;
      blocks[s] = find_block(c, side, d);
      av.available[s] = blocks[s].found;
      av.score[s] = blocks[s].real_count;
    }
    std::vector<std::pair<int, int>> pairs;
    if (pinned)
      pairs.push_back(*pinned);
    else
      pairs = ranked_elimination_pairs(axis, av);
    if (pairs.empty()) return false;

    // Frame, materials, jump data at o1.
    LocalFrame fr = transformation_matrix(o1.theta, o1.phi_angle);
    MaterialPoint mp = mat_.evaluate(o1.position, Phase::Plus);
    MaterialPoint mm = mat_.evaluate(o1.position, Phase::Minus);
    JumpMatrix J = assemble_C(fr, mp.M, mm.M, mp.lambda, mm.lambda, mp.mu, mm.mu);
    double scale = 1.0 / std::max(mp.M, mm.M);
    for (int r = 0; r < 3; ++r)
      for (int col = 0; col < 18; ++col) J.C[r][col] *= scale;
    JumpData jd = jumps_(o1.position, fr);
    Vec3 T_scaled = jd.traction * scale;

    // Value-interpolation protos per side (order 0) and meshline derivative
    // protos (order 1).
    detail::Proto val_proto[2], dm_proto[2];
    for (Phase side : {Phase::Plus, Phase::Minus}) {
      int rs = run_start(side);
      val_proto[int(side)] = line_proto(c, rs, 0, side);
      dm_proto[int(side)] = line_proto(c, rs, 1, side);
    }

    for (auto [l, m] : pairs) {
      auto er = try_elimination_coefficients(J, l, m);
      if (!er) continue;

      std::vector<detail::LocalEq> eqs;
      eqs.reserve(nu);

      // Value jumps at o1: [u_c] = b_c.
      for (int comp = 0; comp < 3; ++comp) {
        auto vp = expand(val_proto[int(Phase::Plus)], comp, nu);
        auto vm = expand(val_proto[int(Phase::Minus)], comp, nu);
        detail::LocalEq eq;
        eq.unk.assign(nu, 0.0);
        for (size_t i = 0; i < nu; ++i) eq.unk[i] = vp.unk[i] - vm.unk[i];
        eq.rhs.constant = jd.b[comp];
        eq.rhs.axpy(-1.0, vp.grid);
        eq.rhs.axpy(1.0, vm.grid);
        eqs.push_back(std::move(eq));
      }

      // Combined derivative conditions at o1.
      double row_max = 0.0;
      for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 18; ++col)
          row_max = std::max(row_max, std::fabs(er->rows[r][col]));
      bool feasible = true;
      for (int r = 0; r < 3 && feasible; ++r) {
        detail::LocalEq eq;
        eq.unk.assign(nu, 0.0);
        eq.rhs.constant = er->rhs(r, T_scaled, jd.eta_jump, jd.zeta_jump);
        for (int comp = 0; comp < 3 && feasible; ++comp)
          for (int s = 0; s < 6; ++s) {
            double w = er->rows[r][jump_col(comp, s)];
            if (std::fabs(w) <= 1e-12 * row_max) continue;
            if (s == l || s == m) {
              // Eliminated sets must have cancelled.
              feasible = false;
              break;
            }
            Phase side = set_is_plus(s) ? Phase::Plus : Phase::Minus;
            detail::LocalFunctional lf;
            if (set_axis(s) == axis) {
              lf = expand(dm_proto[int(side)], comp, nu);
            } else if (blocks[s].found) {
              lf = expand(block_proto(c, side, set_axis(s), blocks[s]), comp, nu);
            } else {
              feasible = false;
              break;
            }
            for (size_t i = 0; i < nu; ++i) eq.unk[i] += w * lf.unk[i];
            eq.rhs.axpy(-w, lf.grid);
          }
        if (feasible) eqs.push_back(std::move(eq));
      }
      if (!feasible) continue;

      // Sharp edge: three more value-jump conditions at o2.
      if (sharp) {
        const Intersection& o2 = *sharp->o2;
        LocalFrame fr2 = transformation_matrix(o2.theta, o2.phi_angle);
        JumpData jd2 = jumps_(o2.position, fr2);
        double sign = (pA == Phase::Plus) ? 1.0 : -1.0;
        std::vector<double> coords(3);
        int r0 = sharp->convex ? j - 1 : j;
        for (int p = 0; p < 3; ++p) coords[p] = g_.coord(axis, r0 + p);
        auto w2 = lagrange_weights(coords, o2.position[axis], 0);
        for (int comp = 0; comp < 3; ++comp) {
          detail::LocalEq eq;
          eq.unk.assign(nu, 0.0);
          eq.rhs.constant = sign * jd2.b[comp];
          if (sharp->convex) {
            // Literal discretization: the far slot cancels, leaving the two
            // unknown-bearing nodes E and A.
            Index3 nE = line_node(c, r0), nA = line_node(c, r0 + 1);
            eq.unk[size_t(3 * c.slot_for(nE, pA) + comp)] += w2[0];
            eq.rhs.add(3 * g_.lin(nE) + comp, w2[0]);  // real u(E), pB side
            eq.unk[size_t(3 * c.slot_for(nA, pB) + comp)] -= w2[1];
            eq.rhs.add(3 * g_.lin(nA) + comp, -w2[1]);  // real u(A), pA side
          } else {
            // Full form over {A, B, E}: pA values minus pB values.
            Index3 nodes[3] = {line_node(c, r0), line_node(c, r0 + 1),
                               line_node(c, r0 + 2)};
            for (int p = 0; p < 3; ++p) {
              const Index3& id = nodes[p];
              for (Phase side : {pA, pB}) {
                double sgn = (side == pA) ? 1.0 : -1.0;
                int slot = c.slot_for(id, side);
                if (slot >= 0)
                  eq.unk[size_t(3 * slot + comp)] += sgn * w2[p];
                else if (phase_at(id) == side)
                  eq.rhs.add(3 * g_.lin(id) + comp, -sgn * w2[p]);
                else
                  feasible = false;
              }
            }
          }
          eqs.push_back(std::move(eq));
        }
        if (!feasible) continue;
      }

      if (eqs.size() != nu) continue;
      DenseMatrix Mx{int(nu)};
      for (size_t r = 0; r < nu; ++r)
        for (size_t cl = 0; cl < nu; ++cl) Mx(int(r), int(cl)) = eqs[r].unk[cl];
      DenseLU lu(Mx);
      if (!lu.ok) continue;
      DenseMatrix inv = lu.inverse();
      double cond = Mx.norm1() * inv.norm1();
      if (!(cond <= 1e12)) continue;

      for (size_t slot = 0; slot < c.solved.size(); ++slot) {
        FictitiousEntry entry;
        entry.cond = cond;
        entry.scheme = sharp ? Scheme::SharpEdge : Scheme::Central;
        entry.pair_l = l;
        entry.pair_m = m;
        for (int comp = 0; comp < 3; ++comp) {
          Functional f;
          for (size_t r = 0; r < nu; ++r)
            f.axpy(inv(int(3 * slot + comp), int(r)), eqs[r].rhs);
          f.compress();
          entry.comp[comp] = std::move(f);
        }
        table.map[FictitiousTable::key(g_.lin(c.solved[slot].idx),
                                       ctx_central(axis))] = std::move(entry);
      }
      return true;
    }
    return false;
  }

  void central_pass(int axis, FictitiousTable& table,
                    std::vector<std::pair<int64_t, int>>& pending) {
    int o1ax = (axis + 1) % 3, o2ax = (axis + 2) % 3;
    for (int b = 0; b < g_.n[o2ax]; ++b)
      for (int a = 0; a < g_.n[o1ax]; ++a) {
        // Collect this line's intersections in index order.
        std::vector<const Intersection*> line;
        for (int m = 0; m + 1 < g_.n[axis]; ++m) {
          Index3 lo{};
          lo[axis] = m;
          lo[o1ax] = a;
          lo[o2ax] = b;
          int idx = isecs_.find(g_, axis, lo);
          if (idx >= 0) line.push_back(&isecs_.all[size_t(idx)]);
        }

        auto pend_nodes = [&](const Intersection& o) {
          Index3 hi = o.lower;
          hi[axis] += 1;
          for (const Index3& id : {o.lower, hi})
            if (!table.find(g_.lin(id), ctx_central(axis)))
              pending.emplace_back(g_.lin(id), axis);
        };

        size_t i = 0;
        while (i < line.size()) {
          // Maximal cluster of crossings sharing nodes.
          size_t end = i + 1;
          while (end < line.size() &&
                 line[end]->lower[axis] == line[end - 1]->lower[axis] + 1)
            ++end;
          size_t len = end - i;

          bool done = false;
          if (len == 1) {
            if (!line[i]->degenerate)
              done = solve_local(*line[i], nullptr, table);
          } else if (len == 2) {
            // Coincident crossings mean the interface is tangent to the line
            // (an on-node touch); the sharp conditions would duplicate.
            // Disassociation from a transversal direction handles it instead.
            double gap = std::fabs(line[i + 1]->position[axis] -
                                   line[i]->position[axis]);
            if (gap > 1e-6 * g_.h[axis]) {
              if (!line[i]->degenerate) {
                SharpConfig cfg{false, line[i + 1]};
                done = solve_local(*line[i], &cfg, table);
              }
              if (!done && !line[i + 1]->degenerate) {
                SharpConfig cfg{true, line[i]};
                done = solve_local(*line[i + 1], &cfg, table);
              }
            }
          }
          if (!done)
            for (size_t q = i; q < end; ++q) pend_nodes(*line[q]);
          i = end;
        }
      }
  }

  void resolve_pending_central(FictitiousTable& table,
                               std::vector<std::pair<int64_t, int>>& pending) {
    // Deterministic order; duplicates possible.
    std::sort(pending.begin(), pending.end());
    pending.erase(std::unique(pending.begin(), pending.end()), pending.end());

    auto context_rank = [](int axis) {  // prefer z, then x, then y
      return axis == 2 ? 0 : (axis == 0 ? 1 : 2);
    };

    std::vector<std::pair<int64_t, int>> unresolved;
    for (auto& [lin, axis] : pending) {
      if (table.find(lin, ctx_central(axis))) continue;
      const FictitiousEntry* best = nullptr;
      int best_rank = 0;
      for (int other = 0; other < 3; ++other) {
        if (other == axis) continue;
        const FictitiousEntry* e = table.find(lin, ctx_central(other));
        if (!e || e->scheme == Scheme::Disassociated) continue;
        if (!best || e->cond < best->cond - 1e-12 ||
            (std::fabs(e->cond - best->cond) <= 1e-12 &&
             context_rank(other) < best_rank)) {
          best = e;
          best_rank = context_rank(other);
        }
      }
      if (!best) {
        unresolved.emplace_back(lin, axis);
        continue;
      }
      FictitiousEntry alias = *best;
      alias.scheme = Scheme::Disassociated;
      table.map[FictitiousTable::key(lin, ctx_central(axis))] = std::move(alias);
    }
    // Second chance: alias from already-disassociated contexts.
    for (auto& [lin, axis] : unresolved) {
      const FictitiousEntry* best = nullptr;
      int best_rank = 0;
      for (int other = 0; other < 3; ++other) {
        if (other == axis) continue;
        const FictitiousEntry* e = table.find(lin, ctx_central(other));
        if (!e) continue;
        if (!best || context_rank(other) < best_rank) {
          best = e;
          best_rank = context_rank(other);
        }
      }
      if (!best) {
        if (!central_needed(g_.unlin(lin), axis)) continue;
        Index3 id = g_.unlin(lin);
        throw UnresolvableFictitious(
            "central fictitious value unresolvable at node (" +
            std::to_string(id[0]) + "," + std::to_string(id[1]) + "," +
            std::to_string(id[2]) + ") axis " + std::to_string(axis));
      }
      FictitiousEntry alias = *best;
      alias.scheme = Scheme::Disassociated;
      table.map[FictitiousTable::key(lin, ctx_central(axis))] = std::move(alias);
    }
  }

  // --------------------------------------------------------------- cross

  // Best resolved central entry at a node (smallest condition number, ties
  // broken z, x, y).
  const FictitiousEntry* best_central(const FictitiousTable& table,
                                      int64_t lin) const {
    auto rank = [](int axis) { return axis == 2 ? 0 : (axis == 0 ? 1 : 2); };
    const FictitiousEntry* best = nullptr;
    int best_rank = 0;
    for (int axis : {2, 0, 1}) {
      const FictitiousEntry* e = table.find(lin, ctx_central(axis));
      if (!e) continue;
      if (!best || e->cond < best->cond - 1e-12 ||
          (std::fabs(e->cond - best->cond) <= 1e-12 && rank(axis) < best_rank)) {
        best = e;
        best_rank = rank(axis);
      }
    }
    return best;
  }

  // Value of the sigma-side extension at a node, as a functional: the real
  // nodal value when the node lies in sigma, otherwise a resolved fictitious
  // entry (central first, then the requested cross plane).
  bool extension_value(const FictitiousTable& table, const Index3& id,
                       Phase sigma, Plane plane, bool allow_cross, int comp,
                       Functional& out, bool& used_fictitious) const {
    int64_t lin = g_.lin(id);
    if (phase_at(id) == sigma) {
      out = Functional{};
      out.add(3 * lin + comp, 1.0);
      used_fictitious = false;
      return true;
    }
    if (const FictitiousEntry* e = best_central(table, lin)) {
      out = e->comp[size_t(comp)];
      used_fictitious = true;
      return true;
    }
    if (allow_cross) {
      if (const FictitiousEntry* e = table.find(lin, ctx_cross(plane))) {
        out = e->comp[size_t(comp)];
        used_fictitious = true;
        return true;
      }
    }
    return false;
  }

  void cross_pass(FictitiousTable& table) {
    std::vector<std::pair<int64_t, Plane>> needs;
    for (int64_t lin = 0; lin < g_.num_nodes(); ++lin)
      for (Plane p : {Plane::XY, Plane::XZ, Plane::YZ})
        if (pm_.cross_irregular(lin, p) && cross_needed(g_.unlin(lin), p))
          needs.emplace_back(lin, p);

    int pass = 0;
    while (!needs.empty()) {
      ++pass;
      std::vector<std::pair<int64_t, Plane>> next;
      bool progress = false;
      for (auto& [lin, plane] : needs) {
        if (resolve_cross(table, lin, plane, pass > 1))
          progress = true;
        else
          next.emplace_back(lin, plane);
      }
      needs.swap(next);
      if (!needs.empty() && !progress) {
        Index3 id = g_.unlin(needs.front().first);
        throw UnresolvableFictitious(
            "cross fictitious value unresolvable at node (" +
            std::to_string(id[0]) + "," + std::to_string(id[1]) + "," +
            std::to_string(id[2]) + ") plane " +
            std::to_string(int(needs.front().second)) + ", " +
            std::to_string(needs.size()) + " needs left");
      }
    }
    table.cross_passes = pass;
  }

  bool resolve_cross(FictitiousTable& table, int64_t lin, Plane plane,
                     bool allow_cross_sources) {
    Index3 id = g_.unlin(lin);
    Phase sigma = opposite(phase_at(id));

    // 1. Disassociation: reuse a central-derivative entry.
    if (pm_.central_irregular_any(lin)) {
      if (const FictitiousEntry* e = best_central(table, lin)) {
        FictitiousEntry alias = *e;
        alias.scheme = Scheme::Disassociated;
        table.map[FictitiousTable::key(lin, ctx_cross(plane))] = std::move(alias);
        return true;
      }
      // No central entry survived (possible at the domain edge); fall through
      // to the extrapolation and combination schemes.
    }

    // 2. Quadratic extrapolation along a ray with three available values.
    static const int dirs[6][2] = {{0, 1}, {0, -1}, {1, 1}, {1, -1}, {2, 1}, {2, -1}};
    for (auto& dir : dirs) {
      int axis = dir[0], sgn = dir[1];
      Index3 p1 = id, p2 = id, p3 = id;
      p1[axis] += sgn;
      p2[axis] += 2 * sgn;
      p3[axis] += 3 * sgn;
      if (!g_.in_bounds(p3)) continue;
      FictitiousEntry entry;
      bool ok = true;
      int fict = 0;
      static const double w[3] = {3.0, -3.0, 1.0};
      for (int comp = 0; comp < 3 && ok; ++comp) {
        Functional acc;
        const Index3 pts[3] = {p1, p2, p3};
        for (int t = 0; t < 3 && ok; ++t) {
          Functional v;
          bool used = false;
          if (!extension_value(table, pts[t], sigma, plane, false, comp, v, used))
            ok = false;
          else {
            acc.axpy(w[t], v);
            if (comp == 0 && used) ++fict;
          }
        }
        if (ok) {
          acc.compress();
          entry.comp[size_t(comp)] = std::move(acc);
        }
      }
      if (!ok) continue;
      entry.scheme = fict <= 1 ? Scheme::ExtrapolatedI
                               : (fict == 2 ? Scheme::ExtrapolatedII
                                            : Scheme::ExtrapolatedIII);
      table.map[FictitiousTable::key(lin, ctx_cross(plane))] = std::move(entry);
      return true;
    }

    // 3. Neighbor combination f(q) = f(n1) + f(n2) - u(p) across the plane
    // diagonal, anchored at an in-sigma corner p.
    auto [a, b] = plane_axes(plane);
    for (int da : {-1, 1})
      for (int db : {-1, 1}) {
        Index3 p = id, n1 = id, n2 = id;
        p[a] -= da;
        p[b] -= db;
        n1[b] -= db;
        n2[a] -= da;
        if (!g_.in_bounds(p)) continue;
        if (phase_at(p) != sigma) continue;
        FictitiousEntry entry;
        bool ok = true;
        for (int comp = 0; comp < 3 && ok; ++comp) {
          Functional acc, v1, v2;
          bool used = false;
          if (!extension_value(table, n1, sigma, plane, allow_cross_sources,
                               comp, v1, used) ||
              !extension_value(table, n2, sigma, plane, allow_cross_sources,
                               comp, v2, used)) {
            ok = false;
            break;
          }
          acc.axpy(1.0, v1);
          acc.axpy(1.0, v2);
          acc.add(3 * g_.lin(p) + comp, -1.0);
          acc.compress();
          entry.comp[size_t(comp)] = std::move(acc);
        }
        if (!ok) continue;
        entry.scheme = Scheme::NeighborCombination;
        table.map[FictitiousTable::key(lin, ctx_cross(plane))] = std::move(entry);
        return true;
      }
    return false;
  }
};

inline FictitiousTable build_fictitious_table(const Grid& g, const PhaseMap& pm,
                                              const IntersectionSet& is,
                                              const MaterialField& mat,
                                              const JumpProvider& jumps) {
  FictitiousBuilder b(g, pm, is, mat, jumps);
  return b.build();
}

}  // namespace mib
