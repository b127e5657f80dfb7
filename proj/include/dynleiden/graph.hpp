#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>
#include "types.hpp"

namespace dynleiden {

#pragma region TYPES
/** Weighted edge (i, j, w). In a batch, each entry is one direction. */
struct Edge {
  vertex_id source = 0;
  vertex_id target = 0;
  edge_weight weight = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};


/**
 * Immutable undirected weighted graph in CSR form.
 * Every edge is stored in both directions; a self-loop is stored once.
 * Neighbors of each vertex are sorted by id.
 * @tparam W edge weight type (float for input graphs, double for super-vertex graphs)
 */
template <class W>
class CsrGraph {
 public:
  using weight_type = W;

  CsrGraph() : offsets_(1, 0) {}

  /**
   * Adopt prebuilt CSR arrays. Rows must already be sorted and symmetric.
   * @param offsets row offsets (length = vertex count + 1)
   * @param targets neighbor ids
   * @param weights edge weights parallel to targets
   */
  static CsrGraph from_csr(std::vector<std::size_t> offsets, std::vector<vertex_id> targets, std::vector<W> weights) {
    if (offsets.empty() || offsets.back() != targets.size() || targets.size() != weights.size())
      throw input_error("inconsistent CSR arrays");
    CsrGraph g;
    g.offsets_ = std::move(offsets);
    g.targets_ = std::move(targets);
    g.weights_ = std::move(weights);
    g.total_weight_ = 0;
    for (W w : g.weights_) g.total_weight_ += double(w);
    return g;
  }

  /** Number of vertices. */
  std::size_t order() const noexcept { return offsets_.size() - 1; }
  /** Number of directed edge entries (2m for graphs without self-loops). */
  std::size_t size() const noexcept { return targets_.size(); }
  /** Sum of all directed edge weights (= 2m). */
  double total_weight() const noexcept { return total_weight_; }

  std::size_t degree(vertex_id u) const noexcept { return offsets_[u + 1] - offsets_[u]; }

  std::span<const vertex_id> neighbors(vertex_id u) const noexcept {
    return {targets_.data() + offsets_[u], degree(u)};
  }

  std::span<const W> edge_weights(vertex_id u) const noexcept {
    return {weights_.data() + offsets_[u], degree(u)};
  }

  /** Weighted degree K_u (a self-loop counts once). */
  double vertex_weight(vertex_id u) const noexcept {
    double k = 0;
    for (W w : edge_weights(u)) k += double(w);
    return k;
  }

  template <class F>
  void for_each_edge(vertex_id u, F&& fn) const {
    for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e)
      fn(targets_[e], weights_[e]);
  }

  std::optional<W> edge_weight(vertex_id u, vertex_id v) const noexcept {
    if (u >= order()) return std::nullopt;
    auto ns = neighbors(u);
    auto it = std::lower_bound(ns.begin(), ns.end(), v);
    if (it == ns.end() || *it != v) return std::nullopt;
    return edge_weights(u)[std::size_t(it - ns.begin())];
  }

  bool has_edge(vertex_id u, vertex_id v) const noexcept { return edge_weight(u, v).has_value(); }

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const vertex_id> targets() const noexcept { return targets_; }
  std::span<const W> weights() const noexcept { return weights_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<vertex_id> targets_;
  std::vector<W> weights_;
  double total_weight_ = 0;
};


/** Input graph: 32-bit ids, 32-bit float weights. */
using Graph = CsrGraph<edge_weight>;


/**
 * Edge deletions and insertions taking G^{t-1} to G^t.
 * Both lists are symmetric: (i,j,w) is present iff (j,i,w) is.
 */
struct BatchUpdate {
  std::vector<Edge> deletions;
  std::vector<Edge> insertions;

  bool empty() const noexcept { return deletions.empty() && insertions.empty(); }
  /** Number of undirected updates. */
  std::size_t undirected_size() const noexcept { return (deletions.size() + insertions.size()) / 2; }
};
#pragma endregion




#pragma region METHODS
namespace detail {
inline std::uint64_t pair_key(vertex_id u, vertex_id v) noexcept {
  if (u > v) std::swap(u, v);
  return (std::uint64_t(u) << 32) | v;
}

inline void sort_edges(std::vector<Edge>& es) {
  std::stable_sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
}

/** Build CSR from directed entries sorted by (source, target) without duplicates. */
inline Graph csr_from_sorted(const std::vector<Edge>& es, std::size_t n) {
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<vertex_id> targets(es.size());
  std::vector<edge_weight> weights(es.size());
  for (const auto& e : es) ++offsets[e.source + 1];
  for (std::size_t u = 0; u < n; ++u) offsets[u + 1] += offsets[u];
  for (std::size_t k = 0; k < es.size(); ++k) {
    targets[k] = es[k].target;
    weights[k] = es[k].weight;
  }
  return Graph::from_csr(std::move(offsets), std::move(targets), std::move(weights));
}

/** Fails unless every (i,j,w) has its (j,i,w) mirror in the same list. */
inline void require_symmetric(std::span<const Edge> es, const char* what) {
  std::vector<Edge> fwd(es.begin(), es.end()), rev;
  rev.reserve(es.size());
  for (const auto& e : es) rev.push_back({e.target, e.source, e.weight});
  sort_edges(fwd);
  sort_edges(rev);
  if (fwd != rev) throw input_error(std::string(what) + " are not symmetric");
}
}  // namespace detail


/**
 * Build an undirected graph from an edge list.
 * Each (i, j, w) is stored as both (i,j,w) and (j,i,w). Duplicate pairs are merged,
 * keeping the last weight given.
 * @param edges undirected edges; ids < vertex_count, weights > 0, no self-loops
 * @param vertex_count number of vertices
 */
inline Graph build_graph(std::span<const Edge> edges, std::size_t vertex_count) {
  std::vector<Edge> es;
  es.reserve(2 * edges.size());
  for (const auto& e : edges) {
    if (e.source >= vertex_count || e.target >= vertex_count)
      throw input_error("vertex id out of range: (" + std::to_string(e.source) + ", " + std::to_string(e.target) + ")");
    if (!(e.weight > 0))
      throw input_error("edge weight must be positive");
    if (e.source == e.target)
      throw input_error("self-loop on vertex " + std::to_string(e.source));
    es.push_back(e);
    es.push_back({e.target, e.source, e.weight});
  }
  detail::sort_edges(es);
  // Keep the last entry of each (source, target) run.
  std::vector<Edge> uniq;
  uniq.reserve(es.size());
  for (std::size_t k = 0; k < es.size(); ++k) {
    if (k + 1 < es.size() && es[k + 1].source == es[k].source && es[k + 1].target == es[k].target) continue;
    uniq.push_back(es[k]);
  }
  return detail::csr_from_sorted(uniq, vertex_count);
}

inline Graph build_graph(std::initializer_list<Edge> edges, std::size_t vertex_count) {
  return build_graph(std::span<const Edge>(edges.begin(), edges.size()), vertex_count);
}


/** Weighted degree of every vertex. */
template <class W>
inline std::vector<double> vertex_weights(const CsrGraph<W>& g) {
  std::vector<double> k(g.order());
  for (std::size_t u = 0; u < g.order(); ++u) k[u] = g.vertex_weight(vertex_id(u));
  return k;
}


/** Undirected edges (u < v), in CSR order. */
inline std::vector<Edge> undirected_edges(const Graph& g) {
  std::vector<Edge> es;
  es.reserve(g.size() / 2);
  for (std::size_t u = 0; u < g.order(); ++u)
    g.for_each_edge(vertex_id(u), [&](vertex_id v, edge_weight w) {
      if (u < v) es.push_back({vertex_id(u), v, w});
    });
  return es;
}


/**
 * Produce G^t = (E \ deletions) ∪ insertions.
 * Deletions must exist with the stored weight; insertions must be new.
 */
inline Graph apply_batch(const Graph& g, const BatchUpdate& b) {
  const std::size_t n = g.order();
  auto check_ids = [&](const Edge& e) {
    if (e.source >= n || e.target >= n)
      throw input_error("batch references vertex outside the graph");
  };
  std::unordered_set<std::uint64_t> deleted;
  deleted.reserve(b.deletions.size());
  for (const auto& e : b.deletions) {
    check_ids(e);
    auto w = g.edge_weight(e.source, e.target);
    if (!w) throw input_error("deleting non-existent edge (" + std::to_string(e.source) + ", " + std::to_string(e.target) + ")");
    if (*w != e.weight) throw input_error("deletion weight differs from stored edge weight");
    deleted.insert((std::uint64_t(e.source) << 32) | e.target);
  }
  for (const auto& e : b.insertions) {
    check_ids(e);
    if (e.source == e.target) throw input_error("inserting a self-loop");
    if (!(e.weight > 0)) throw input_error("edge weight must be positive");
    if (g.has_edge(e.source, e.target))
      throw input_error("inserting existing edge (" + std::to_string(e.source) + ", " + std::to_string(e.target) + ")");
  }
  detail::require_symmetric(b.deletions, "deletions");
  detail::require_symmetric(b.insertions, "insertions");

  std::vector<Edge> es;
  es.reserve(g.size() - b.deletions.size() + b.insertions.size());
  for (std::size_t u = 0; u < n; ++u)
    g.for_each_edge(vertex_id(u), [&](vertex_id v, edge_weight w) {
      if (!deleted.count((std::uint64_t(u) << 32) | v)) es.push_back({vertex_id(u), v, w});
    });
  es.insert(es.end(), b.insertions.begin(), b.insertions.end());
  detail::sort_edges(es);
  for (std::size_t k = 1; k < es.size(); ++k)
    if (es[k].source == es[k - 1].source && es[k].target == es[k - 1].target)
      throw input_error("duplicate insertion (" + std::to_string(es[k].source) + ", " + std::to_string(es[k].target) + ")");
  return detail::csr_from_sorted(es, n);
}


/**
 * Random batch: round(size * insert_fraction) unit-weight insertions
 * between uniformly chosen non-adjacent vertex pairs, and the rest deletions drawn
 * uniformly without replacement from existing edges (with their weights). Reverse edges are included;
 * both lists are sorted by (source, target).
 * @param g current graph
 * @param size number of undirected updates
 * @param insert_fraction fraction of insertions in [0, 1]
 * @param seed random seed
 */
inline BatchUpdate generate_batch(const Graph& g, std::size_t size, double insert_fraction, std::uint64_t seed) {
  if (!(insert_fraction >= 0 && insert_fraction <= 1))
    throw input_error("insert fraction must be in [0, 1]");
  const std::size_t n = g.order();
  const std::size_t ninsert = std::size_t(std::llround(double(size) * insert_fraction));
  const std::size_t ndelete = size - ninsert;
  auto existing = undirected_edges(g);
  if (ndelete > existing.size())
    throw input_error("batch needs " + std::to_string(ndelete) + " deletions but graph has " + std::to_string(existing.size()) + " edges");
  const double pairs = n < 2 ? 0.0 : double(n) * double(n - 1) / 2;
  if (double(ninsert) > pairs - double(existing.size()))
    throw input_error("not enough absent vertex pairs for " + std::to_string(ninsert) + " insertions");

  std::mt19937_64 rng(seed);
  BatchUpdate b;
  // Partial Fisher-Yates: first ndelete slots are a uniform sample.
  for (std::size_t k = 0; k < ndelete; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, existing.size() - 1);
    std::swap(existing[k], existing[pick(rng)]);
    const auto& e = existing[k];
    b.deletions.push_back({e.source, e.target, e.weight});
    b.deletions.push_back({e.target, e.source, e.weight});
  }
  if (ninsert > 0) {
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(2 * ninsert);
    std::uniform_int_distribution<vertex_id> pick(0, vertex_id(n - 1));
    while (chosen.size() < ninsert) {
      vertex_id u = pick(rng), v = pick(rng);
      if (u == v || g.has_edge(u, v)) continue;
      if (!chosen.insert(detail::pair_key(u, v)).second) continue;
      b.insertions.push_back({u, v, 1});
      b.insertions.push_back({v, u, 1});
    }
  }
  detail::sort_edges(b.deletions);
  detail::sort_edges(b.insertions);
  return b;
}


/** Batch that undoes `b` (deletions become insertions and vice versa). */
inline BatchUpdate inverse_batch(const BatchUpdate& b) {
  return {b.insertions, b.deletions};
}
#pragma endregion

}  // namespace dynleiden
