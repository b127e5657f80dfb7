#pragma once
#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>
#include "detail/parallel.hpp"
#include "graph.hpp"
#include "leiden/config.hpp"
#include "leiden/leiden.hpp"
#include "leiden/phases.hpp"
#include "leiden/scratch_map.hpp"
#include "types.hpp"

namespace dynleiden {

#pragma region CONTEXT
/** State carried from one time step to the next. */
struct DynamicContext {
  Membership membership;            // C^{t-1}
  std::vector<double> K;            // weighted degree of each vertex
  std::vector<double> sigma;        // total weight of each community
  std::vector<double> delta_sigma;  // cumulative weight change of each community

  std::size_t order() const noexcept { return membership.size(); }

  /** Context for a membership computed from scratch on `g`. */
  static DynamicContext from_membership(const Graph& g, Membership m) {
    if (m.size() != g.order()) throw input_error("membership size differs from vertex count");
    DynamicContext x;
    x.K = vertex_weights(g);
    x.sigma.assign(g.order(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] >= g.order()) throw input_error("community id out of range");
      x.sigma[m[i]] += x.K[i];
    }
    x.delta_sigma.assign(g.order(), 0);
    x.membership = std::move(m);
    return x;
  }
};


/** Result of one dynamic step. */
struct StepResult {
  DynamicContext ctx;
  LeidenResult run;
};
#pragma endregion




#pragma region AUXILIARY WEIGHTS
namespace detail {
inline void require_batch(const BatchUpdate& b, std::size_t n) {
  for (const auto* list : {&b.deletions, &b.insertions})
    for (const auto& e : *list)
      if (e.source >= n || e.target >= n) throw input_error("batch references vertex outside the graph");
  require_symmetric(b.deletions, "deletions");
  require_symmetric(b.insertions, "insertions");
}
}  // namespace detail


/**
 * Weighted degrees and community weights after a batch, from the previous
 * ones. Each thread owns the vertices and communities with id % T = t.
 * @returns {K^t, Σ^t}, with Σ^t under the previous membership
 */
inline std::pair<std::vector<double>, std::vector<double>> update_weights(const BatchUpdate& b, const DynamicContext& x, int threads) {
  std::vector<double> K = x.K, S = x.sigma;
  const auto& C = x.membership;
  #pragma omp parallel num_threads(threads)
  {
    const std::size_t t = std::size_t(detail::thread_index()), T = std::size_t(detail::thread_total());
    for (const auto& e : b.deletions) {
      vertex_id c = C[e.source];
      if (e.source % T == t) K[e.source] -= e.weight;
      if (c % T == t) S[c] -= e.weight;
    }
    for (const auto& e : b.insertions) {
      vertex_id c = C[e.source];
      if (e.source % T == t) K[e.source] += e.weight;
      if (c % T == t) S[c] += e.weight;
    }
  }
  return {std::move(K), std::move(S)};
}


/** Cumulative community weight change after a batch; deletions and insertions both count as positive. */
inline std::vector<double> update_changes(const BatchUpdate& b, const DynamicContext& x, int threads) {
  std::vector<double> D = x.delta_sigma;
  const auto& C = x.membership;
  #pragma omp parallel num_threads(threads)
  {
    const std::size_t t = std::size_t(detail::thread_index()), T = std::size_t(detail::thread_total());
    for (const auto* list : {&b.deletions, &b.insertions})
      for (const auto& e : *list) {
        vertex_id c = C[e.source];
        if (c % T == t) D[c] += e.weight;
      }
  }
  return D;
}
#pragma endregion




#pragma region AFFECTED VERTICES
/**
 * Initial affected vertices for delta-screening. Same-community deletions
 * affect the source, its neighbors and the whole community; for each source
 * of cross-community insertions, the source, its neighbors, and the community
 * receiving the most inserted weight are affected.
 */
inline FlagVector ds_affected(const Graph& g, const BatchUpdate& b, std::span<const vertex_id> prev, int threads) {
  const std::size_t n = g.order();
  FlagVector dV(n, 0), dE(n, 0), dC(n, 0);
  for (const auto& e : b.deletions) {
    if (prev[e.source] != prev[e.target]) continue;
    dV[e.source] = dE[e.source] = 1;
    dC[prev[e.target]] = 1;
  }
  std::vector<Edge> ins = b.insertions;
  detail::sort_edges(ins);
  std::vector<std::size_t> groups;
  for (std::size_t k = 0; k < ins.size(); ++k)
    if (k == 0 || ins[k].source != ins[k - 1].source) groups.push_back(k);
  groups.push_back(ins.size());
  const std::size_t ngroups = groups.size() - 1;
  std::vector<ScratchMap> maps(std::size_t(std::max(threads, 1)));
  for (auto& m : maps) m.reserve(n);
  #pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (std::size_t k = 0; k < ngroups; ++k) {
    ScratchMap& h = maps[detail::thread_index()];
    const vertex_id i = ins[groups[k]].source;
    for (std::size_t e = groups[k]; e < groups[k + 1]; ++e)
      if (prev[i] != prev[ins[e].target]) h.add(prev[ins[e].target], ins[e].weight);
    vertex_id best = kNoVertex;
    double best_w = 0;
    for (vertex_id c : h.keys())
      if (best == kNoVertex || h.get(c) > best_w || (h.get(c) == best_w && c < best)) {
        best = c;
        best_w = h.get(c);
      }
    h.clear();
    if (best == kNoVertex) continue;
    detail::store_relaxed(dV[i], std::uint8_t(1));
    detail::store_relaxed(dE[i], std::uint8_t(1));
    detail::store_relaxed(dC[best], std::uint8_t(1));
  }
  #pragma omp parallel for schedule(dynamic, 2048) num_threads(threads)
  for (std::size_t i = 0; i < n; ++i) {
    if (dE[i])
      for (vertex_id j : g.neighbors(vertex_id(i))) detail::store_relaxed(dV[j], std::uint8_t(1));
    if (dC[prev[i]]) detail::store_relaxed(dV[i], std::uint8_t(1));
  }
  return dV;
}


/** Initial affected vertices for dynamic frontier: endpoints of same-community deletions and cross-community insertions. */
inline FlagVector df_affected(const BatchUpdate& b, std::span<const vertex_id> prev) {
  FlagVector dV(prev.size(), 0);
  for (const auto& e : b.deletions)
    if (prev[e.source] == prev[e.target]) dV[e.source] = 1;
  for (const auto& e : b.insertions)
    if (prev[e.source] != prev[e.target]) dV[e.source] = 1;
  return dV;
}


/** Hooks over a fixed affected set. */
struct ScreenedHooks {
  FlagVector& affected;
  bool is_affected(vertex_id i) const noexcept { return detail::load_relaxed(affected[i]); }
  bool in_range(vertex_id i) const noexcept { return detail::load_relaxed(affected[i]); }
  void on_change(vertex_id) const noexcept {}
};


/** Hooks for a frontier that grows to the neighbors of every moved vertex. */
struct FrontierHooks {
  const Graph& g;
  FlagVector& affected;
  bool is_affected(vertex_id i) const noexcept { return detail::load_relaxed(affected[i]); }
  bool in_range(vertex_id) const noexcept { return true; }
  void on_change(vertex_id i) const noexcept {
    for (vertex_id j : g.neighbors(i)) detail::store_relaxed(affected[j], std::uint8_t(1));
  }
};
#pragma endregion




#pragma region FRONTENDS
namespace detail {
template <AffectedPolicy Hooks>
StepResult dynamic_step(const Graph& g, const BatchUpdate& b, const DynamicContext& x, const LeidenConfig& cfg, Hooks& hooks) {
  const int T = cfg.threads();
  auto [K, S] = update_weights(b, x, T);
  auto D = update_changes(b, x, T);
  auto marks = mark_communities(b, x.membership, S, D, cfg.refine_tolerance, true, T);
  StepResult r;
  r.run = leiden_main(g, x.membership, K, S, std::move(marks.split), std::move(marks.refine), hooks, cfg, true);
  const std::size_t n = g.order();
  r.ctx.membership = r.run.membership;
  r.ctx.sigma.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) r.ctx.sigma[r.ctx.membership[i]] += K[i];
  r.ctx.delta_sigma.assign(n, 0);
  for (std::size_t c = 0; c < n; ++c)
    if (r.run.inherited[c]) r.ctx.delta_sigma[c] = D[c];
  r.ctx.K = std::move(K);
  return r;
}

inline bool empty_step(const Graph& g, const BatchUpdate& b, const DynamicContext& x, const LeidenConfig& cfg, StepResult& r) {
  cfg.validate();
  if (x.order() != g.order() || x.K.size() != g.order() || x.sigma.size() != g.order() || x.delta_sigma.size() != g.order())
    throw input_error("context does not match the graph");
  require_batch(b, g.order());
  if (!b.empty()) return false;
  r.ctx = x;
  r.run.membership = x.membership;
  r.run.inherited.assign(g.order(), 1);
  r.run.tracked = cfg.track;
  return true;
}
}  // namespace detail


/**
 * Naive-dynamic step: every vertex is processed, starting from the previous membership.
 * @param g graph at time t
 * @param b batch taking G^{t-1} to g
 * @param x context at t-1
 */
inline StepResult nd_leiden(const Graph& g, const BatchUpdate& b, const DynamicContext& x, const LeidenConfig& cfg) {
  StepResult r;
  if (detail::empty_step(g, b, x, cfg, r)) return r;
  AllAffected hooks;
  return detail::dynamic_step(g, b, x, cfg, hooks);
}


/** Delta-screening step: only vertices screened by the batch are processed. */
inline StepResult ds_leiden(const Graph& g, const BatchUpdate& b, const DynamicContext& x, const LeidenConfig& cfg) {
  StepResult r;
  if (detail::empty_step(g, b, x, cfg, r)) return r;
  FlagVector dV = ds_affected(g, b, x.membership, cfg.threads());
  ScreenedHooks hooks{dV};
  return detail::dynamic_step(g, b, x, cfg, hooks);
}


/** Dynamic-frontier step: starts from the batch endpoints and spreads to neighbors of moved vertices. */
inline StepResult df_leiden(const Graph& g, const BatchUpdate& b, const DynamicContext& x, const LeidenConfig& cfg) {
  StepResult r;
  if (detail::empty_step(g, b, x, cfg, r)) return r;
  FlagVector dV = df_affected(b, x.membership);
  FrontierHooks hooks{g, dV};
  return detail::dynamic_step(g, b, x, cfg, hooks);
}
#pragma endregion

}  // namespace dynleiden
