#ifndef QSZEGO_PARALLEL_HPP
#define QSZEGO_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace qszego {

inline int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Splits [0, n) into fixed blocks, maps each block on the pool and combines
/// block results in block order, so the reduction is independent of thread
/// count and scheduling.
template <class Result, class BlockFn, class CombineFn>
Result parallel_block_reduce(std::size_t n, std::size_t block_size, int threads,
                             Result init, BlockFn&& block_fn, CombineFn&& combine) {
  if (n == 0) return init;
  block_size = std::max<std::size_t>(1, block_size);
  const std::size_t nblocks = (n + block_size - 1) / block_size;
  std::vector<Result> partial(nblocks, init);

  if (threads <= 1 || nblocks == 1) {
    for (std::size_t b = 0; b < nblocks; ++b)
      partial[b] = block_fn(b * block_size, std::min(n, (b + 1) * block_size));
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    const int nt = std::min<int>(threads, static_cast<int>(nblocks));
    for (int w = 0; w < nt; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t b = next.fetch_add(1);
          if (b >= nblocks) return;
          partial[b] = block_fn(b * block_size, std::min(n, (b + 1) * block_size));
        }
      });
    for (auto& th : pool) th.join();
  }
  Result out = init;
  for (std::size_t b = 0; b < nblocks; ++b) out = combine(out, partial[b]);
  return out;
}

template <class BlockFn>
void parallel_for_blocks(std::size_t n, std::size_t block_size, int threads,
                         BlockFn&& block_fn) {
  parallel_block_reduce<int>(
      n, block_size, threads, 0,
      [&](std::size_t lo, std::size_t hi) {
        block_fn(lo, hi);
        return 0;
      },
      [](int, int) { return 0; });
}

}  // namespace qszego

#endif
