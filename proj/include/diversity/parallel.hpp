#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace diversity {

/// Splits [0, count) into `threads` contiguous chunks and runs fn(chunk, begin,
/// end) on each. Chunk results are meant to be merged in chunk order, which
/// keeps every caller's output independent of the thread count.
template <typename Fn>
void parallel_chunks(unsigned threads, std::size_t count, Fn && fn)
{
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2 * threads) {
        fn(std::size_t{0}, std::size_t{0}, count);
        return;
    }
    std::size_t per = (count + threads - 1) / threads;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t begin = t * per, end = std::min(count, begin + per);
        if (begin >= end)
            break;
        pool.emplace_back([&fn, t, begin, end] { fn(std::size_t{t}, begin, end); });
    }
}

} // namespace diversity
