#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace normlab {

/// Calls body(begin, end, chunk_index) for the fixed partition of [0, n)
/// into chunks of `chunk` items. The partition does not depend on
/// `workers`, so per-chunk results can be combined reproducibly.
template <typename Body>
void for_each_chunk(std::size_t n, std::size_t chunk, unsigned workers, Body&& body) {
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t chunks = (n + chunk - 1) / chunk;
    auto run = [&](std::size_t c) { body(c * chunk, std::min(n, (c + 1) * chunk), c); };
    if (workers <= 1 || chunks <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
    for (unsigned w = 0; w < count; ++w) {
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < chunks; c = next++) run(c);
        });
    }
}

}  // namespace normlab
