#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace grasshopper {

// Worker count: hardware concurrency, capped by GRASSHOPPER_THREADS when set.
inline unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GRASSHOPPER_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
        }
    }
    return n;
}

// Splits [0, count) into `workers` contiguous blocks and calls
// fn(block, begin, end) for each, one thread per block.
template <typename Fn>
void parallel_blocks(std::size_t count, unsigned workers, Fn&& fn) {
    workers = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(workers, count)));
    if (workers == 1) {
        fn(0u, std::size_t{0}, count);
        return;
    }
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned b = 0; b < workers; ++b) {
        const std::size_t begin = count * b / workers;
        const std::size_t end = count * (b + 1) / workers;
        threads.emplace_back([&fn, b, begin, end] { fn(b, begin, end); });
    }
}

}  // namespace grasshopper
