#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace episim::detail {

/// Splits [0, count) into `threads` contiguous chunks and runs
/// fn(chunk, begin, end) on each. Chunk boundaries depend only on `count` and
/// `threads`, so callers can merge per-chunk output in chunk order.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (chunks == 1) {
    fn(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) {
    workers.emplace_back([&, c] { fn(c, c * count / chunks, (c + 1) * count / chunks); });
  }
  fn(std::size_t{0}, std::size_t{0}, count / chunks);
}

}  // namespace episim::detail
