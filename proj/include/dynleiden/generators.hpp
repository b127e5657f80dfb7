#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>
#include "graph.hpp"
#include "types.hpp"

namespace dynleiden {

namespace detail {
/** k-th pair (u, v) with u < v, in the order (0,1), (0,2), (1,2), (0,3), ... */
inline std::pair<std::size_t, std::size_t> unrank_pair(std::uint64_t k) {
  auto v = std::uint64_t((1 + std::sqrt(1 + 8 * double(k))) / 2);
  while (v * (v - 1) / 2 > k) --v;
  while ((v + 1) * v / 2 <= k) ++v;
  return {std::size_t(k - v * (v - 1) / 2), std::size_t(v)};
}
}  // namespace detail


/**
 * Planted-partition graph: `blocks` groups of `block_size` vertices; each
 * pair inside a group is linked with probability p_in, each pair across
 * groups with probability p_out. Unit weights.
 */
inline Graph planted_partition(std::size_t blocks, std::size_t block_size, double p_in, double p_out, std::uint64_t seed) {
  const std::size_t n = blocks * block_size;
  std::mt19937_64 rng(seed);
  std::vector<Edge> es;
  // Geometric skipping over the pair sequence keeps sparse graphs cheap.
  auto sample = [&](double p, auto&& emit, std::uint64_t total) {
    if (p <= 0) return;
    if (p >= 1) {
      for (std::uint64_t k = 0; k < total; ++k) emit(k);
      return;
    }
    std::geometric_distribution<std::uint64_t> skip(p);
    for (std::uint64_t k = skip(rng); k < total; k += skip(rng) + 1) emit(k);
  };
  const std::uint64_t inside = std::uint64_t(block_size) * (block_size - 1) / 2;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t base = b * block_size;
    sample(p_in, [&](std::uint64_t k) {
      auto [u, v] = detail::unrank_pair(k);
      es.push_back({vertex_id(base + u), vertex_id(base + v), 1});
    }, inside);
  }
  const std::uint64_t all = std::uint64_t(n) * (n - (n > 0)) / 2;
  sample(p_out, [&](std::uint64_t k) {
    auto [u, v] = detail::unrank_pair(k);
    if (u / block_size != v / block_size) es.push_back({vertex_id(u), vertex_id(v), 1});
  }, all);
  return build_graph(es, n);
}


/** Erdős–Rényi G(n, p) with weights drawn uniformly from {1, ..., max_weight}. */
inline Graph random_graph(std::size_t n, double p, std::uint32_t max_weight, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<std::uint32_t> weight(1, std::max<std::uint32_t>(1, max_weight));
  std::vector<Edge> es;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (edge(rng)) es.push_back({vertex_id(u), vertex_id(v), float(weight(rng))});
  return build_graph(es, n);
}

}  // namespace dynleiden
