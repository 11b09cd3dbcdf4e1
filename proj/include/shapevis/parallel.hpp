#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace shapevis {

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw != 0 ? hw : 1;
}

// Runs fn(begin, end, chunk_index) over a static partition of [0, count).
// Workers must write only to per-item or per-chunk slots; under that rule
// the result is identical for every thread count.
template <typename Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads);
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        fn(std::size_t{0}, count, 0u);
        return;
    }
    const std::size_t nchunks = std::min<std::size_t>(threads, count);
    std::vector<std::thread> workers;
    workers.reserve(nchunks);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t begin = count * c / nchunks;
        const std::size_t end = count * (c + 1) / nchunks;
        workers.emplace_back([&, begin, end, c] {
            try {
                fn(begin, end, static_cast<unsigned>(c));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

// Element-wise variant: fn(i) for i in [0, count).
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    parallel_chunks(count, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
    });
}

} // namespace shapevis
