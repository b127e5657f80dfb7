#pragma once
#include <random>
#include <vector>
#include <dynleiden/graph.hpp>

namespace fixtures {
using namespace dynleiden;

inline Graph tri() { return build_graph({{0, 1, 1}, {1, 2, 1}, {2, 0, 1}}, 3); }

inline Graph k3k3() {
  return build_graph({{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {3, 4, 1}, {4, 5, 1}, {5, 3, 1}, {2, 3, 1}}, 6);
}

inline Graph path4() { return build_graph({{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, 4); }

/** Random graph with integer weights in [1, max_weight]. */
inline Graph random_weighted(std::size_t n, double p, int max_weight, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<int> w(1, max_weight);
  std::vector<Edge> es;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (edge(rng)) es.push_back({vertex_id(u), vertex_id(v), float(w(rng))});
  return build_graph(es, n);
}

/** Random membership with ids drawn from [0, n). */
inline Membership random_membership(std::size_t n, std::size_t communities, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, communities - 1);
  std::vector<vertex_id> label(communities);
  std::uniform_int_distribution<vertex_id> id(0, vertex_id(n - 1));
  for (auto& l : label) l = id(rng);
  Membership m(n);
  for (auto& c : m) c = label[pick(rng)];
  return m;
}
}  // namespace fixtures
