#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace eals {

namespace detail {

// Runs one chunk per worker thread and rethrows the first captured exception
// in chunk order.
template <typename PerChunk>
void run_chunked(std::size_t n, std::size_t workers, PerChunk&& per_chunk) {
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t begin = n * t / workers;
    const std::size_t end = n * (t + 1) / workers;
    pool.emplace_back([&per_chunk, &errors, t, begin, end] {
      try {
        per_chunk(t, begin, end);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace detail

// Splits [0, n) into `threads` contiguous chunks and runs `body(begin, end)`
// on each. Chunk boundaries depend only on (n, threads), so any run with the
// same thread count partitions work identically. With threads <= 1 the body
// runs inline on the calling thread.
template <typename Body>
void parallel_chunks(std::size_t n, unsigned threads, Body&& body) {
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  detail::run_chunked(n, workers,
                      [&body](std::size_t, std::size_t begin, std::size_t end) {
                        body(begin, end);
                      });
}

// Parallel reduction with deterministic merge order: each chunk fills its own
// accumulator, then accumulators are merged sequentially by chunk index.
// Reduction order depends on the thread count only, never on scheduling.
template <typename Acc, typename Fill, typename Merge>
Acc parallel_reduce(std::size_t n, unsigned threads, Acc zero, Fill&& fill, Merge&& merge) {
  if (threads <= 1 || n <= 1) {
    Acc acc = zero;
    if (n > 0) fill(acc, std::size_t{0}, n);
    return acc;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<Acc> partials(workers, zero);
  detail::run_chunked(n, workers,
                      [&fill, &partials](std::size_t t, std::size_t begin, std::size_t end) {
                        fill(partials[t], begin, end);
                      });
  Acc acc = zero;
  for (auto& p : partials) merge(acc, p);
  return acc;
}

}  // namespace eals
