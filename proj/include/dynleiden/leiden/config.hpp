#pragma once
#include <cstddef>
#include <cstdint>
#include <string>
#include "../detail/parallel.hpp"
#include "../types.hpp"

namespace dynleiden {

/** Tunables for one Leiden run. Defaults follow the reference setup. */
struct LeidenConfig {
  double tolerance = 1e-2;        // τ, local-moving convergence
  double tolerance_drop = 10;     // τ is divided by this after each pass
  double refine_tolerance = 0.6;  // τ_re
  std::size_t max_iterations = 20;
  std::size_t max_passes = 10;
  std::size_t vertex_chunk = 2048;
  std::size_t aggregation_chunk = 0;  // 0: 2048 for static runs, 32 for dynamic ones
  int thread_count = 0;               // 0: OpenMP default
  bool track = true;                  // community-id tracking in dynamic runs
  std::uint64_t seed = 42;            // free-id probe offsets in tracking

  int threads() const noexcept { return thread_count > 0 ? thread_count : detail::default_thread_count(); }

  std::size_t aggregation_chunk_for(bool dynamic) const noexcept {
    return aggregation_chunk ? aggregation_chunk : (dynamic ? 32 : 2048);
  }

  void validate() const {
    auto fail = [](const std::string& what) { throw input_error("invalid config: " + what); };
    if (!(tolerance > 0)) fail("tolerance must be positive");
    if (!(tolerance_drop > 0)) fail("tolerance drop must be positive");
    if (!(refine_tolerance > 0 && refine_tolerance < 1)) fail("refine tolerance must be in (0, 1)");
    if (max_iterations == 0) fail("max iterations must be positive");
    if (max_passes == 0) fail("max passes must be positive");
    if (vertex_chunk == 0) fail("vertex chunk must be positive");
    if (thread_count < 0) fail("thread count must be non-negative");
  }
};

}  // namespace dynleiden
