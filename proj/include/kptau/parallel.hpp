#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace kptau {

// Splits [0, n) into contiguous chunks and runs fn(begin, end, chunk) on a
// pool of threads. Returns the per-chunk results in chunk order so callers
// can merge deterministically regardless of scheduling.
template <class Result, class Fn>
std::vector<Result> parallel_chunks(std::size_t n, Fn&& fn, std::size_t min_chunk = 64) {
    std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    std::size_t chunks = std::clamp<std::size_t>(n / std::max<std::size_t>(1, min_chunk), 1, hw);
    std::vector<Result> results(chunks);
    if (chunks == 1) {
        results[0] = fn(std::size_t{0}, n, std::size_t{0});
        return results;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(chunks);
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t begin = n * c / chunks;
        std::size_t end = n * (c + 1) / chunks;
        pool.emplace_back([&, begin, end, c] {
            try {
                results[c] = fn(begin, end, c);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

}  // namespace kptau
