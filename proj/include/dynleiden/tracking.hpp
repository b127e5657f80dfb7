#pragma once
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>
#include "detail/parallel.hpp"
#include "types.hpp"

namespace dynleiden {

#pragma region VOTING
/** Surviving candidate of a weighted vote, and its weight. */
struct OverlapRecord {
  vertex_id candidate = kNoVertex;
  double weight = 0;

  bool empty() const noexcept { return candidate == kNoVertex; }
};


/**
 * One step of weighted Boyer-Moore voting.
 * Same candidate adds its weight; a lighter challenger is subtracted;
 * otherwise the challenger takes over with the surplus.
 */
inline void cast_vote(OverlapRecord& r, vertex_id candidate, double w) noexcept {
  if (r.candidate == candidate) r.weight += w;
  else if (r.weight > w) r.weight -= w;
  else r = {candidate, w - r.weight};
}


/**
 * Weighted majority candidate of a stream of (candidate, weight) votes.
 * If some candidate holds more than half the total weight, it is returned.
 */
inline OverlapRecord weighted_majority_vote(std::span<const std::pair<vertex_id, double>> votes) noexcept {
  OverlapRecord r;
  for (auto [c, w] : votes) cast_vote(r, c, w);
  return r;
}
#pragma endregion




#pragma region TRACK
struct TrackResult {
  Membership membership;
  /** inherited[c] = 1 if id c was carried over from an old community. */
  FlagVector inherited;
};


namespace detail {
/** Tracking without input checks, for memberships produced by the driver. */
inline TrackResult track_unchecked(std::span<const vertex_id> cur, std::span<const vertex_id> prev, std::span<const double> K,
                                   std::uint64_t seed, int threads) {
  const std::size_t n = cur.size();
  // Most overlapping current community of each old community, with the
  // exact overlap weight. Each thread owns the old communities with id % T = t
  // and votes in vertex order.
  std::vector<OverlapRecord> H(n);
  std::vector<double> overlap(n, 0);
  FlagVector present(n, 0);
  #pragma omp parallel num_threads(threads)
  {
    const std::size_t t = std::size_t(thread_index()), T = std::size_t(thread_total());
    auto owns = [&](vertex_id c) { return T == 1 || c % T == t; };
    for (std::size_t i = 0; i < n; ++i) {
      if (owns(prev[i])) cast_vote(H[prev[i]], cur[i], K[i]);
      if (owns(cur[i])) present[cur[i]] = 1;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (owns(prev[i]) && cur[i] == H[prev[i]].candidate) overlap[prev[i]] += K[i];
  }
  // Best old community of each current community. An old id stays claimed
  // (owner) even when its vote loses.
  std::vector<OverlapRecord> Hp(n);
  std::vector<vertex_id> owner(n, kNoVertex);
  for (std::size_t c = 0; c < n; ++c) {
    if (H[c].empty()) continue;
    owner[c] = H[c].candidate;
    auto& h = Hp[H[c].candidate];
    if (h.empty() || h.weight <= overlap[c]) h = {vertex_id(c), overlap[c]};
  }
  // Free ids for current communities nobody voted for.
  TrackResult res{Membership(n), FlagVector(n, 0)};
  bool exhausted = false;
  #pragma omp parallel num_threads(threads)
  {
    std::mt19937_64 rng(seed + std::uint64_t(thread_index()));
    std::size_t probe = n > 1 ? std::uniform_int_distribution<std::size_t>(1, n - 1)(rng) : 0;
    #pragma omp for schedule(static)
    for (std::size_t c = 0; c < n; ++c) {
      if (!H[c].empty() && Hp[H[c].candidate].candidate == c) res.inherited[c] = 1;
      if (!present[c] || !Hp[c].empty()) continue;
      bool claimed = false;
      for (std::size_t tries = 0; tries <= 2 * n && !claimed; ++tries) {
        claimed = load_relaxed(owner[probe]) == kNoVertex && compare_exchange(owner[probe], kNoVertex, vertex_id(c));
        if (!claimed) probe = (probe + 1) % n;
      }
      if (claimed) Hp[c] = {vertex_id(probe), 0};
      else store_relaxed(exhausted, true);
    }
  }
  // Unreachable: an old community leaves at most (size - 1) vertices to
  // unvoted communities, so enough ids are always free.
  if (exhausted) throw std::logic_error("no free community id");
  #pragma omp parallel for schedule(static) num_threads(threads)
  for (std::size_t i = 0; i < n; ++i)
    res.membership[i] = Hp[cur[i]].candidate;
  return res;
}
}  // namespace detail


/**
 * Rename current communities after the old community they overlap most.
 * Each old community votes (weighted by vertex degree) for the current
 * community holding most of its weight; each current community then takes
 * the id of the heaviest old community that voted for it. Current communities
 * without a vote get an id not used by any old community.
 * @param cur current community of each vertex
 * @param prev old community of each vertex
 * @param K current weighted degree of each vertex
 * @param seed seed for the free-id probe offsets
 * @param threads worker count
 */
inline TrackResult track_communities(std::span<const vertex_id> cur, std::span<const vertex_id> prev, std::span<const double> K,
                                     std::uint64_t seed, int threads) {
  const std::size_t n = cur.size();
  if (prev.size() != n || K.size() != n) throw input_error("membership sizes differ");
  for (std::size_t i = 0; i < n; ++i)
    if (cur[i] >= n || prev[i] >= n) throw input_error("community id out of range");
  return detail::track_unchecked(cur, prev, K, seed, threads);
}
#pragma endregion

}  // namespace dynleiden
