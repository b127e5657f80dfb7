#pragma once
#include <cstddef>
#include <span>
#include <vector>
#include "graph.hpp"
#include "types.hpp"

namespace dynleiden {

#pragma region MODULARITY
namespace detail {
template <class W>
inline void require_membership(const CsrGraph<W>& g, std::span<const vertex_id> m) {
  if (m.size() != g.order()) throw input_error("membership size differs from vertex count");
  for (vertex_id c : m)
    if (c >= g.order()) throw input_error("community id out of range: " + std::to_string(c));
}
}  // namespace detail


/**
 * Modularity of a partition.
 * @param g graph (2m = total weight)
 * @param m community of each vertex
 * @returns Q in [-0.5, 1]; 0 for a graph without edges
 */
template <class W>
inline double modularity(const CsrGraph<W>& g, std::span<const vertex_id> m) {
  detail::require_membership(g, m);
  const std::size_t n = g.order();
  const double M2 = g.total_weight();
  if (M2 <= 0) return 0;
  std::vector<double> sigma(n), total(n);
  for (std::size_t u = 0; u < n; ++u) {
    vertex_id c = m[u];
    g.for_each_edge(vertex_id(u), [&](vertex_id v, W w) {
      if (m[v] == c) sigma[c] += double(w);
      total[c] += double(w);
    });
  }
  double q = 0;
  for (std::size_t c = 0; c < n; ++c)
    q += sigma[c] / M2 - (total[c] / M2) * (total[c] / M2);
  return q;
}


/**
 * Gain in modularity from moving vertex i from community d to c.
 * @param ki_to_c edge weight between i and c
 * @param ki_to_d edge weight between i and d, excluding i itself
 * @param ki weighted degree of i
 * @param sigma_c total weight of c
 * @param sigma_d total weight of d (including i)
 * @param m total undirected weight (half of total_weight)
 */
inline double delta_modularity(double ki_to_c, double ki_to_d, double ki, double sigma_c, double sigma_d, double m) noexcept {
  return (ki_to_c - ki_to_d) / m - ki * (ki + sigma_c - sigma_d) / (2 * m * m);
}


/**
 * Gain in modularity from moving vertex i into community c, from the graph directly.
 * Zero when c is already the community of i.
 */
template <class W>
inline double delta_modularity(const CsrGraph<W>& g, std::span<const vertex_id> m, vertex_id i, vertex_id c) {
  detail::require_membership(g, m);
  const vertex_id d = m[i];
  if (c == d) return 0;
  double ki_to_c = 0, ki_to_d = 0, sigma_c = 0, sigma_d = 0;
  g.for_each_edge(i, [&](vertex_id v, W w) {
    if (v == i) return;
    if (m[v] == c) ki_to_c += double(w);
    if (m[v] == d) ki_to_d += double(w);
  });
  for (std::size_t u = 0; u < g.order(); ++u) {
    if (m[u] == c) sigma_c += g.vertex_weight(vertex_id(u));
    if (m[u] == d) sigma_d += g.vertex_weight(vertex_id(u));
  }
  return delta_modularity(ki_to_c, ki_to_d, g.vertex_weight(i), sigma_c, sigma_d, g.total_weight() / 2);
}
#pragma endregion




#pragma region CONNECTIVITY
/**
 * Number of communities whose induced subgraph is disconnected.
 * One BFS per community, started from its first member.
 */
template <class W>
inline std::size_t disconnected_count(const CsrGraph<W>& g, std::span<const vertex_id> m) {
  detail::require_membership(g, m);
  const std::size_t n = g.order();
  std::vector<vertex_id> start(n, kNoVertex);
  std::vector<std::size_t> size(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    if (start[m[u]] == kNoVertex) start[m[u]] = vertex_id(u);
    ++size[m[u]];
  }
  std::vector<std::uint8_t> seen(n, 0);
  std::vector<vertex_id> queue;
  std::size_t count = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (start[c] == kNoVertex) continue;
    queue.assign(1, start[c]);
    seen[start[c]] = 1;
    std::size_t reached = 0;
    for (std::size_t k = 0; k < queue.size(); ++k) {
      ++reached;
      g.for_each_edge(queue[k], [&](vertex_id v, W) {
        if (seen[v] || m[v] != c) return;
        seen[v] = 1;
        queue.push_back(v);
      });
    }
    if (reached != size[c]) ++count;
  }
  return count;
}
#pragma endregion




#pragma region MATCH
/** Percentage of vertices with the same community id in both memberships. */
inline double match_percent(std::span<const vertex_id> a, std::span<const vertex_id> b) {
  if (a.size() != b.size()) throw input_error("membership sizes differ");
  if (a.empty()) return 100;
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] == b[i]) ++same;
  return 100.0 * double(same) / double(a.size());
}
#pragma endregion

}  // namespace dynleiden
