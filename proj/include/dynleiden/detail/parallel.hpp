#pragma once
#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dynleiden::detail {

#pragma region THREADS
inline int thread_index() noexcept {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

inline int thread_total() noexcept {
#ifdef _OPENMP
  return omp_get_num_threads();
#else
  return 1;
#endif
}

/** Default worker count: what the runtime would pick for a parallel region. */
inline int default_thread_count() noexcept {
#ifdef _OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return std::max(1u, std::thread::hardware_concurrency());
#endif
}
#pragma endregion




#pragma region ATOMICS
// Shared arrays are plain vectors; concurrent access goes through atomic_ref.
// Relaxed ordering is enough for the monotone flags and the membership
// array (stale reads only delay convergence, they never break invariants).

template <class T>
inline T load_relaxed(const T& x) noexcept {
  return std::atomic_ref<T>(const_cast<T&>(x)).load(std::memory_order_relaxed);
}

template <class T>
inline void store_relaxed(T& x, T v) noexcept {
  std::atomic_ref<T>(x).store(v, std::memory_order_relaxed);
}

template <class T>
inline void atomic_add(T& x, T v) noexcept {
  std::atomic_ref<T>(x).fetch_add(v, std::memory_order_relaxed);
}

/** Returns true if x held `expected` and now holds `desired`. */
template <class T>
inline bool compare_exchange(T& x, T expected, T desired) noexcept {
  return std::atomic_ref<T>(x).compare_exchange_strong(expected, desired, std::memory_order_acq_rel);
}

template <class T>
inline void atomic_min(T& x, T v) noexcept {
  std::atomic_ref<T> ref(x);
  T cur = ref.load(std::memory_order_relaxed);
  while (v < cur && !ref.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {}
}
#pragma endregion




#pragma region SCAN
/**
 * In-place exclusive prefix sum; returns the total.
 * Sequential: it is a small fraction of every phase that uses it.
 */
template <class T>
inline T exclusive_scan_inplace(std::span<T> a) {
  T sum = T();
  for (auto& x : a) {
    T v = x;
    x = sum;
    sum += v;
  }
  return sum;
}
#pragma endregion

}  // namespace dynleiden::detail
