#pragma once
// Reference computations written directly from the definitions, on dense
// adjacency matrices. They share no code with the library.
#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <vector>
#include <dynleiden/graph.hpp>

namespace oracle {
using dynleiden::vertex_id;
using Matrix = std::vector<std::vector<double>>;

template <class W>
inline Matrix dense(const dynleiden::CsrGraph<W>& g) {
  const std::size_t n = g.order();
  Matrix A(n, std::vector<double>(n, 0));
  for (std::size_t u = 0; u < n; ++u) {
    auto ns = g.neighbors(vertex_id(u));
    auto ws = g.edge_weights(vertex_id(u));
    for (std::size_t k = 0; k < ns.size(); ++k) A[u][ns[k]] += double(ws[k]);
  }
  return A;
}

/** Q = Σ_ij [A_ij - k_i k_j / 2m] δ(c_i, c_j) / 2m. */
inline double modularity(const Matrix& A, const std::vector<vertex_id>& C) {
  const std::size_t n = A.size();
  std::vector<double> k(n, 0);
  double two_m = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      k[i] += A[i][j];
      two_m += A[i][j];
    }
  if (two_m == 0) return 0;
  double q = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (C[i] == C[j]) q += A[i][j] - k[i] * k[j] / two_m;
  return q / two_m;
}

/** Best modularity over all set partitions (restricted growth strings). */
inline double best_modularity(const Matrix& A, std::vector<vertex_id>* best_partition = nullptr) {
  const std::size_t n = A.size();
  std::vector<vertex_id> a(n, 0);
  double best = -1;
  auto rec = [&](auto&& self, std::size_t i, vertex_id top) -> void {
    if (i == n) {
      double q = modularity(A, a);
      if (q > best) {
        best = q;
        if (best_partition) *best_partition = a;
      }
      return;
    }
    for (vertex_id c = 0; c <= top + 1; ++c) {
      a[i] = c;
      self(self, i + 1, std::max(top, c));
    }
  };
  if (n == 0) return 0;
  rec(rec, 1, 0);
  return best;
}

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(std::size_t a, std::size_t b) { p[find(a)] = find(b); }
};

/** Union-find over intra-community edges; a community with >1 root is disconnected. */
inline std::size_t disconnected(const Matrix& A, const std::vector<vertex_id>& C) {
  const std::size_t n = A.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (A[i][j] > 0 && C[i] == C[j]) uf.unite(i, j);
  std::map<vertex_id, std::set<std::size_t>> roots;
  for (std::size_t i = 0; i < n; ++i) roots[C[i]].insert(uf.find(i));
  std::size_t bad = 0;
  for (auto& [c, r] : roots) bad += r.size() > 1;
  return bad;
}

/** Component id (root) of each vertex within its community. */
inline std::vector<std::size_t> components(const Matrix& A, const std::vector<vertex_id>& C) {
  const std::size_t n = A.size();
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (A[i][j] > 0 && C[i] == C[j]) uf.unite(i, j);
  std::vector<std::size_t> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = uf.find(i);
  return r;
}

/** True if a and b induce the same partition (ids may differ). */
template <class A, class B>
inline bool same_partition(const std::vector<A>& a, const std::vector<B>& b) {
  if (a.size() != b.size()) return false;
  std::map<A, B> f;
  std::map<B, A> g;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it, fresh] = f.emplace(a[i], b[i]);
    auto [jt, fresh2] = g.emplace(b[i], a[i]);
    if (it->second != b[i] || jt->second != a[i]) return false;
  }
  return true;
}

/** W[c][d] = Σ_i Σ_j A_ij [C_i = c][C_j = d]. */
inline Matrix aggregate(const Matrix& A, const std::vector<vertex_id>& C, std::size_t count) {
  Matrix W(count, std::vector<double>(count, 0));
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t i = 0; i < A.size(); ++i)
      for (std::size_t j = 0; j < A.size(); ++j)
        if (C[i] == c) W[c][C[j]] += A[i][j];
  return W;
}

/**
 * Sequential refinement inside bounds: every vertex starts alone; in vertex
 * order, a vertex still alone joins the neighboring sub-community (same bound)
 * with the largest modularity gain, if positive; ties go to the lowest id.
 * Gains are computed from full modularity differences.
 */
inline std::vector<vertex_id> greedy_refine(const Matrix& A, const std::vector<vertex_id>& bounds) {
  const std::size_t n = A.size();
  std::vector<vertex_id> C(n);
  std::iota(C.begin(), C.end(), 0);
  std::vector<std::size_t> size(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (size[C[i]] != 1 || C[i] != i) continue;
    std::set<vertex_id> cand;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && A[i][j] > 0 && bounds[j] == bounds[i]) cand.insert(C[j]);
    double base = modularity(A, C), best = 0;
    vertex_id target = vertex_id(i);
    for (vertex_id c : cand) {
      if (C[c] != c) continue;
      auto D = C;
      D[i] = c;
      double gain = modularity(A, D) - base;
      if (gain > best + 1e-12) {
        best = gain;
        target = c;
      }
    }
    if (target != i) {
      --size[i];
      ++size[target];
      C[i] = target;
    }
  }
  return C;
}

/** Weighted degree of every vertex and weight of every community. */
inline std::pair<std::vector<double>, std::vector<double>> weights(const Matrix& A, const std::vector<vertex_id>& C) {
  std::vector<double> K(A.size(), 0), S(A.size(), 0);
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (double w : A[i]) K[i] += w;
    S[C[i]] += K[i];
  }
  return {K, S};
}
}  // namespace oracle
