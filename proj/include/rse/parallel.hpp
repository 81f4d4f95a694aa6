#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rse {

// Default worker count: RSE_THREADS if set, else hardware concurrency.
unsigned default_threads();

// Runs body(begin, end) over contiguous chunks of [0, count) on up to
// `threads` workers. Exceptions from workers are rethrown on the caller.
template <class Body>
void parallel_for(std::uint64_t count, unsigned threads, Body body) {
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2) {
        body(std::uint64_t(0), count);
        return;
    }
    std::uint64_t workers = std::min<std::uint64_t>(threads, count);
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex lock;
    for (std::uint64_t w = 0; w < workers; ++w) {
        std::uint64_t begin = count * w / workers, end = count * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> g(lock);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rse
