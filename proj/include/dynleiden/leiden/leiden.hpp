#pragma once
#include <chrono>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>
#include "../graph.hpp"
#include "../tracking.hpp"
#include "../types.hpp"
#include "config.hpp"
#include "phases.hpp"
#include "scratch_map.hpp"

namespace dynleiden {

/** Counters for one pass. */
struct PassStats {
  std::size_t vertices = 0;       // vertices in the pass graph
  double tolerance = 0;           // τ used by local moving
  LocalMoveStats local;
  std::size_t split_marked = 0;   // vertices in communities split by BFS
  RefineStats refine;
  std::size_t communities = 0;    // communities after refinement
};


struct LeidenResult {
  Membership membership;
  std::vector<PassStats> passes;
  std::size_t affected = 0;       // vertices initially affected
  /** For dynamic runs with tracking: ids carried over from the previous step. */
  FlagVector inherited;
  bool tracked = false;
  double tracking_ms = 0;
};


/**
 * Leiden driver for static and dynamic runs.
 * The first pass starts from `prev` and only processes what `hooks` marks;
 * later passes work on the aggregated graph with every vertex affected.
 * @param g graph at time t
 * @param prev starting membership (identity for static runs)
 * @param K weighted degree of each vertex in g
 * @param sigma total weight of each community of `prev`
 * @param split communities to split, by id
 * @param refine communities to refine, by id
 * @param hooks affected-vertex policy for the first pass
 * @param cfg tunables
 * @param dynamic enables split marking while moving and id tracking
 */
template <AffectedPolicy Hooks>
LeidenResult leiden_main(const Graph& g, std::span<const vertex_id> prev, std::span<const double> K, std::span<const double> sigma,
                         FlagVector split, FlagVector refine, Hooks& hooks, const LeidenConfig& cfg, bool dynamic) {
  cfg.validate();
  const std::size_t n = g.order();
  if (prev.size() != n || K.size() != n || sigma.size() != n || split.size() != n || refine.size() != n)
    throw input_error("auxiliary arrays do not match the vertex count");
  for (vertex_id c : prev)
    if (c >= n) throw input_error("community id out of range: " + std::to_string(c));
  const int T = cfg.threads();
  LeidenResult res;

  FlagVector processed(n, 1);
  std::size_t affected = 0;
  #pragma omp parallel for schedule(static) reduction(+:affected) num_threads(T)
  for (std::size_t i = 0; i < n; ++i)
    if (hooks.is_affected(vertex_id(i))) {
      processed[i] = 0;
      ++affected;
    }
  res.affected = affected;
  bool any_mark = false;
  for (std::size_t c = 0; c < n && !any_mark; ++c) any_mark = split[c] || refine[c];
  if (n == 0 || (affected == 0 && !any_mark)) {
    res.membership.assign(prev.begin(), prev.end());
    res.inherited.assign(n, 1);
    res.tracked = dynamic && cfg.track;
    return res;
  }

  std::vector<ScratchMap> maps(static_cast<std::size_t>(T));
  for (auto& m : maps) m.reserve(n);
  Membership C(n);
  std::iota(C.begin(), C.end(), vertex_id(0));
  Membership Cp(prev.begin(), prev.end());
  std::vector<double> Kp(K.begin(), K.end()), Sp(sigma.begin(), sigma.end());
  CsrGraph<double> gp;  // aggregated graph; unused in the first pass
  double tau = cfg.tolerance;
  AllAffected all;

  auto run_pass = [&](const auto& G, bool first) {
    PassStats ps;
    ps.vertices = G.order();
    ps.tolerance = tau;
    if (first) ps.local = local_moving(G, Cp, Kp, Sp, processed, dynamic ? &split : nullptr, hooks, tau, cfg, maps);
    else ps.local = local_moving(G, Cp, Kp, Sp, processed, dynamic ? &split : nullptr, all, tau, cfg, maps);
    subset_renumber(Cp, Sp, split, refine, T);
    for (std::size_t i = 0; i < G.order(); ++i)
      if (split[Cp[i]] && !refine[Cp[i]]) ++ps.split_marked;
    Cp = split_communities(G, Cp, split, refine, T);
    Membership bounds = Cp;
    ps.refine = refine_communities(G, bounds, Cp, Kp, Sp, refine, cfg, maps);
    return ps;
  };

  for (std::size_t lp = 0; lp < cfg.max_passes; ++lp) {
    const bool first = lp == 0;
    PassStats ps = first ? run_pass(g, true) : run_pass(gp, false);
    const std::size_t li = ps.local.iterations;
    const bool refined = ps.refine.marked > 0;
    Membership dense = Cp;
    ps.communities = dense_renumber(dense);
    res.passes.push_back(ps);
    if (li <= 1 && !refined) break;
    if (li <= 1 && !first) break;
    Cp.swap(dense);
    for (auto& c : C) c = Cp[c];
    gp = first ? aggregate(g, Cp, ps.communities, cfg.aggregation_chunk_for(dynamic), maps)
               : aggregate(gp, Cp, ps.communities, cfg.aggregation_chunk_for(dynamic), maps);
    const std::size_t np = gp.order();
    Kp = vertex_weights(gp);
    Sp = Kp;
    processed.assign(np, 0);
    Cp.resize(np);
    std::iota(Cp.begin(), Cp.end(), vertex_id(0));
    split.assign(np, 0);
    refine.assign(np, 1);
    tau /= cfg.tolerance_drop;
  }
  for (auto& c : C) c = Cp[c];

  if (dynamic && cfg.track) {
    auto t0 = std::chrono::steady_clock::now();
    TrackResult t = detail::track_unchecked(C, prev, K, cfg.seed, T);
    res.tracking_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    res.membership = std::move(t.membership);
    res.inherited = std::move(t.inherited);
    res.tracked = true;
  } else {
    res.membership = std::move(C);
    res.inherited.assign(n, 0);
  }
  return res;
}


/** Static Leiden from singleton communities. */
inline LeidenResult static_leiden(const Graph& g, const LeidenConfig& cfg) {
  const std::size_t n = g.order();
  Membership prev(n);
  std::iota(prev.begin(), prev.end(), vertex_id(0));
  auto K = vertex_weights(g);
  AllAffected all;
  return leiden_main(g, prev, K, K, FlagVector(n, 0), FlagVector(n, 1), all, cfg, false);
}

}  // namespace dynleiden
