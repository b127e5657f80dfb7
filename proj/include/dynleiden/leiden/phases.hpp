#pragma once
#include <algorithm>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>
#include "../detail/parallel.hpp"
#include "../graph.hpp"
#include "../metrics.hpp"
#include "../types.hpp"
#include "config.hpp"
#include "scratch_map.hpp"

namespace dynleiden {

#pragma region HOOKS
/**
 * Decides which vertices the first pass looks at.
 * is_affected(i): start with i unprocessed.
 * in_range(i): i may be processed when it becomes unprocessed again.
 * on_change(i): called after i changed its community.
 */
template <class H>
concept AffectedPolicy = requires(H& h, vertex_id i) {
  { h.is_affected(i) } -> std::convertible_to<bool>;
  { h.in_range(i) } -> std::convertible_to<bool>;
  h.on_change(i);
};


/** Every vertex is affected; used by static runs, ND, and passes after the first. */
struct AllAffected {
  bool is_affected(vertex_id) const noexcept { return true; }
  bool in_range(vertex_id) const noexcept { return true; }
  void on_change(vertex_id) const noexcept {}
};
#pragma endregion




#pragma region MARK COMMUNITIES
/** Split and refine flags, indexed by community id. */
struct CommunityMarks {
  FlagVector split;
  FlagVector refine;
};


/**
 * Mark communities to split (same-community deletions) and to refine
 * (same-community updates in communities whose cumulative change ratio
 * ΔΣ/Σ exceeds τ_re). ΔΣ of each refine-marked community is reset to zero.
 * @param batch update taking G^{t-1} to G^t
 * @param prev community of each vertex at t-1
 * @param sigma Σ^t, indexed by community id
 * @param delta_sigma ΔΣ^t, indexed by community id (updated)
 * @param refine_tolerance τ_re
 * @param dynamic false marks every community for refinement
 * @param threads worker count
 */
inline CommunityMarks mark_communities(const BatchUpdate& batch, std::span<const vertex_id> prev, std::span<const double> sigma,
                                       std::span<double> delta_sigma, double refine_tolerance, bool dynamic, int threads) {
  const std::size_t n = prev.size();
  CommunityMarks m{FlagVector(n, 0), FlagVector(n, 0)};
  if (!dynamic) {
    std::fill(m.refine.begin(), m.refine.end(), 1);
    return m;
  }
  auto exceeds = [&](vertex_id c) {
    if (sigma[c] <= 0) return delta_sigma[c] > 0;
    return delta_sigma[c] / sigma[c] > refine_tolerance;
  };
  const auto& del = batch.deletions;
  const auto& ins = batch.insertions;
  #pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t k = 0; k < del.size(); ++k) {
    vertex_id c = prev[del[k].source], d = prev[del[k].target];
    if (c != d) continue;
    detail::store_relaxed(m.split[c], std::uint8_t(1));
    if (exceeds(c)) detail::store_relaxed(m.refine[c], std::uint8_t(1));
  }
  #pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t k = 0; k < ins.size(); ++k) {
    vertex_id c = prev[ins[k].source], d = prev[ins[k].target];
    if (c == d && exceeds(c)) detail::store_relaxed(m.refine[c], std::uint8_t(1));
  }
  for (std::size_t c = 0; c < n; ++c)
    if (m.refine[c]) delta_sigma[c] = 0;
  return m;
}
#pragma endregion




#pragma region LOCAL MOVING
struct LocalMoveStats {
  std::size_t iterations = 0;  // 1-based; an already optimal state gives 1
  double last_delta = 0;       // total ΔQ of the last iteration
  std::size_t processed = 0;   // vertex scans over all iterations
  std::size_t moves = 0;
};


namespace detail {
/**
 * Best community for i among the scanned ones: largest strictly positive
 * ΔQ, ties to the lowest id. Returns kNoVertex if no move helps.
 */
inline std::pair<vertex_id, double> choose_community(const ScratchMap& h, vertex_id d, double ki, double ki_to_d,
                                                     std::span<const double> sigma, double M) {
  vertex_id best = kNoVertex;
  double best_dq = 0;
  const double sigma_d = load_relaxed(sigma[d]);
  for (vertex_id c : h.keys()) {
    if (c == d) continue;
    double dq = delta_modularity(h.get(c), ki_to_d, ki, load_relaxed(sigma[c]), sigma_d, M);
    if (dq > best_dq || (dq == best_dq && best != kNoVertex && c < best)) {
      best = c;
      best_dq = dq;
    }
  }
  return {best, best_dq};
}
}  // namespace detail


/**
 * Move vertices greedily to the neighboring community with the best ΔQ until
 * an iteration gains no more than τ. Vertices are pruned once processed and
 * re-queued when a neighbor moves.
 * @param g current (super-vertex) graph
 * @param C community of each vertex (updated)
 * @param K weighted degree of each vertex
 * @param sigma total weight of each community (updated)
 * @param processed pruning flags; affected vertices must be 0 (updated)
 * @param split if non-null, source communities of moves are marked here
 * @param hooks affected-vertex policy
 * @param tau convergence tolerance
 * @param cfg thread count, chunk size, iteration limit
 * @param maps one scratch map per worker
 */
template <class W, AffectedPolicy Hooks>
LocalMoveStats local_moving(const CsrGraph<W>& g, Membership& C, std::span<const double> K, std::vector<double>& sigma,
                            FlagVector& processed, FlagVector* split, Hooks& hooks, double tau, const LeidenConfig& cfg,
                            std::vector<ScratchMap>& maps) {
  const std::size_t n = g.order();
  const double M = g.total_weight() / 2;
  const int T = int(maps.size());
  LocalMoveStats s;
  for (std::size_t li = 0; li < cfg.max_iterations; ++li) {
    double dq = 0;
    std::size_t nproc = 0, nmove = 0;
    #pragma omp parallel for schedule(dynamic, cfg.vertex_chunk) reduction(+:dq, nproc, nmove) num_threads(T)
    for (std::size_t u = 0; u < n; ++u) {
      const vertex_id i = vertex_id(u);
      if (detail::load_relaxed(processed[i])) continue;
      detail::store_relaxed(processed[i], std::uint8_t(1));
      if (!hooks.in_range(i)) continue;
      ++nproc;
      ScratchMap& h = maps[detail::thread_index()];
      g.for_each_edge(i, [&](vertex_id j, W w) {
        if (j != i) h.add(detail::load_relaxed(C[j]), double(w));
      });
      const vertex_id d = detail::load_relaxed(C[i]);
      auto [best, best_dq] = detail::choose_community(h, d, K[i], h.get(d), sigma, M);
      h.clear();
      if (best == kNoVertex) continue;
      detail::atomic_add(sigma[d], -K[i]);
      detail::atomic_add(sigma[best], K[i]);
      detail::store_relaxed(C[i], best);
      dq += best_dq;
      ++nmove;
      for (vertex_id j : g.neighbors(i))
        detail::store_relaxed(processed[j], std::uint8_t(0));
      if (split) detail::store_relaxed((*split)[d], std::uint8_t(1));
      hooks.on_change(i);
    }
    s.iterations = li + 1;
    s.last_delta = dq;
    s.processed += nproc;
    s.moves += nmove;
    if (dq <= tau) break;
  }
  return s;
}
#pragma endregion




#pragma region SUBSET RENUMBER
/**
 * Rename every community after its smallest member vertex, carrying Σ',
 * split and refine flags along. Other arrays indexed by community id are
 * left alone.
 */
inline void subset_renumber(Membership& C, std::vector<double>& sigma, FlagVector& split, FlagVector& refine, int threads) {
  const std::size_t n = C.size();
  std::vector<vertex_id> rep(n, kNoVertex);
  #pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t i = 0; i < n; ++i)
    detail::atomic_min(rep[C[i]], vertex_id(i));
  std::vector<double> sigma2(n, 0);
  FlagVector split2(n, 0), refine2(n, 0);
  #pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t c = 0; c < n; ++c) {
    vertex_id r = rep[c];
    if (r == kNoVertex) continue;
    sigma2[r] = sigma[c];
    split2[r] = split[c];
    refine2[r] = refine[c];
  }
  #pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t i = 0; i < n; ++i)
    C[i] = rep[C[i]];
  sigma.swap(sigma2);
  split.swap(split2);
  refine.swap(refine2);
}
#pragma endregion




#pragma region SPLIT
/**
 * Separate the connected components of every community marked for splitting
 * but not for refinement. Each component is named after its BFS start vertex.
 * Communities must be named after a member vertex.
 * @returns the new membership; unmarked communities keep their ids
 */
template <class W>
Membership split_communities(const CsrGraph<W>& g, std::span<const vertex_id> C, std::span<const std::uint8_t> split,
                             std::span<const std::uint8_t> refine, int threads) {
  const std::size_t n = g.order();
  Membership C2(n);
  FlagVector vis(n, 0), busy(n, 0);
  #pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t i = 0; i < n; ++i) {
    vertex_id c = C[i];
    if (split[c] && !refine[c]) C2[i] = vertex_id(i);
    else {
      C2[i] = c;
      vis[i] = 1;
    }
  }
  auto bfs = [&](vertex_id i, std::vector<vertex_id>& queue) {
    const vertex_id c = C[i];
    queue.assign(1, i);
    detail::store_relaxed(vis[i], std::uint8_t(1));
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const vertex_id u = queue[q];
      C2[u] = i;
      for (vertex_id v : g.neighbors(u)) {
        if (C[v] != c || detail::load_relaxed(vis[v])) continue;
        detail::store_relaxed(vis[v], std::uint8_t(1));
        queue.push_back(v);
      }
    }
  };
  #pragma omp parallel num_threads(threads)
  {
    const std::size_t t = std::size_t(detail::thread_index()), TT = std::size_t(detail::thread_total());
    const std::size_t start = n * t / TT;
    std::vector<vertex_id> queue;
    for (std::size_t k = 0; k < n; ++k) {
      const vertex_id i = vertex_id((start + k) % n);
      const vertex_id c = C[i];
      if (detail::load_relaxed(vis[i]) || detail::load_relaxed(busy[c])) continue;
      if (!detail::compare_exchange(busy[c], std::uint8_t(0), std::uint8_t(1))) continue;
      if (!detail::load_relaxed(vis[i])) bfs(i, queue);
      detail::store_relaxed(busy[c], std::uint8_t(0));
    }
  }
  // Vertices skipped by every thread while their community was locked.
  std::vector<vertex_id> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (!vis[i]) bfs(vertex_id(i), queue);
  return C2;
}
#pragma endregion




#pragma region REFINE
struct RefineStats {
  std::size_t marked = 0;  // vertices in bounds marked for refinement
  std::size_t moves = 0;
};


/**
 * Refine communities marked in ΔR. Each vertex of a marked bound starts as a
 * singleton; then every vertex still alone may join, once, the best sub-community
 * of a neighbor within the same bound. A join claims the vertex's singleton
 * weight and only lands on a sub-community whose founder has not left it, so
 * every sub-community stays connected.
 * @param g current graph
 * @param bounds community bounds C'_B
 * @param C membership (updated)
 * @param K weighted degree of each vertex
 * @param sigma total weight of each community (updated)
 * @param refine ΔR, indexed by bound id
 */
template <class W>
RefineStats refine_communities(const CsrGraph<W>& g, std::span<const vertex_id> bounds, Membership& C, std::span<const double> K,
                               std::vector<double>& sigma, std::span<const std::uint8_t> refine, const LeidenConfig& cfg,
                               std::vector<ScratchMap>& maps) {
  const std::size_t n = g.order();
  const double M = g.total_weight() / 2;
  const int T = int(maps.size());
  std::size_t marked = 0, moves = 0;
  #pragma omp parallel for schedule(static) reduction(+:marked) num_threads(T)
  for (std::size_t i = 0; i < n; ++i) {
    if (!refine[bounds[i]]) continue;
    C[i] = vertex_id(i);
    sigma[i] = K[i];
    ++marked;
  }
  #pragma omp parallel for schedule(dynamic, cfg.vertex_chunk) reduction(+:moves) num_threads(T)
  for (std::size_t u = 0; u < n; ++u) {
    const vertex_id i = vertex_id(u);
    if (!refine[bounds[i]]) continue;
    const vertex_id c = detail::load_relaxed(C[i]);
    if (detail::load_relaxed(sigma[c]) != K[i]) continue;
    ScratchMap& h = maps[detail::thread_index()];
    g.for_each_edge(i, [&](vertex_id j, W w) {
      if (j != i && bounds[j] == bounds[i]) h.add(detail::load_relaxed(C[j]), double(w));
    });
    auto [best, best_dq] = detail::choose_community(h, c, K[i], h.get(c), sigma, M);
    h.clear();
    if (best == kNoVertex || best == c || detail::load_relaxed(C[best]) != best) continue;
    if (!detail::compare_exchange(sigma[c], K[i], 0.0)) continue;
    for (;;) {
      double s = detail::load_relaxed(sigma[best]);
      if (s <= 0) {
        detail::store_relaxed(sigma[c], K[i]);
        break;
      }
      if (detail::compare_exchange(sigma[best], s, s + K[i])) {
        detail::store_relaxed(C[i], best);
        ++moves;
        break;
      }
    }
  }
  return {marked, moves};
}
#pragma endregion




#pragma region AGGREGATE
/**
 * Rename communities to [0, count) in increasing id order.
 * @returns number of communities
 */
inline std::size_t dense_renumber(Membership& C) {
  const std::size_t n = C.size();
  std::vector<vertex_id> id(n, 0);
  for (vertex_id c : C) id[c] = 1;
  vertex_id next = 0;
  for (std::size_t c = 0; c < n; ++c)
    id[c] = id[c] ? next++ : kNoVertex;
  for (auto& c : C) c = id[c];
  return next;
}


/**
 * Collapse each community into a super-vertex. Edge weights between
 * communities are summed; intra-community weight becomes a self-loop.
 * @param g current graph
 * @param C dense membership in [0, count)
 * @param count number of communities
 * @param chunk dynamic schedule chunk over communities
 */
template <class W>
CsrGraph<double> aggregate(const CsrGraph<W>& g, std::span<const vertex_id> C, std::size_t count, std::size_t chunk,
                           std::vector<ScratchMap>& maps) {
  const std::size_t n = g.order();
  const int T = int(maps.size());
  // Members of each community, CSR.
  std::vector<std::size_t> coff(count + 1, 0);
  for (std::size_t i = 0; i < n; ++i) ++coff[C[i]];
  detail::exclusive_scan_inplace(std::span<std::size_t>(coff));
  std::vector<vertex_id> cvert(n);
  {
    std::vector<std::size_t> pos(coff.begin(), coff.end() - 1);
    for (std::size_t i = 0; i < n; ++i) cvert[pos[C[i]]++] = vertex_id(i);
  }
  // Upper bound on super-vertex degree: total member degree.
  std::vector<std::size_t> yoff(count + 1, 0);
  for (std::size_t i = 0; i < n; ++i) yoff[C[i]] += g.degree(vertex_id(i));
  detail::exclusive_scan_inplace(std::span<std::size_t>(yoff));
  std::vector<vertex_id> ytgt(yoff[count]);
  std::vector<double> ywt(yoff[count]);
  std::vector<std::size_t> ydeg(count + 1, 0);
  #pragma omp parallel for schedule(dynamic, chunk) num_threads(T)
  for (std::size_t c = 0; c < count; ++c) {
    ScratchMap& h = maps[detail::thread_index()];
    for (std::size_t k = coff[c]; k < coff[c + 1]; ++k)
      g.for_each_edge(cvert[k], [&](vertex_id j, W w) { h.add(C[j], double(w)); });
    h.sort_keys();
    std::size_t e = yoff[c];
    for (vertex_id d : h.keys()) {
      ytgt[e] = d;
      ywt[e] = h.get(d);
      ++e;
    }
    ydeg[c] = e - yoff[c];
    h.clear();
  }
  // Compact rows.
  std::vector<std::size_t> offsets(ydeg);
  const std::size_t m = detail::exclusive_scan_inplace(std::span<std::size_t>(offsets));
  std::vector<vertex_id> targets(m);
  std::vector<double> weights(m);
  for (std::size_t c = 0; c < count; ++c) {
    std::copy_n(ytgt.begin() + std::ptrdiff_t(yoff[c]), ydeg[c], targets.begin() + std::ptrdiff_t(offsets[c]));
    std::copy_n(ywt.begin() + std::ptrdiff_t(yoff[c]), ydeg[c], weights.begin() + std::ptrdiff_t(offsets[c]));
  }
  return CsrGraph<double>::from_csr(std::move(offsets), std::move(targets), std::move(weights));
}
#pragma endregion

}  // namespace dynleiden
