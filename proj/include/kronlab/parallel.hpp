#ifndef KRONLAB_PARALLEL_HPP_
#define KRONLAB_PARALLEL_HPP_

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kronlab {

inline unsigned effective_workers(std::uint64_t count, unsigned threads) noexcept {
    const std::uint64_t cap = std::max<std::uint64_t>(count, 1);
    return static_cast<unsigned>(std::clamp<std::uint64_t>(threads == 0 ? 1 : threads, 1, cap));
}

// Splits [0, count) into `workers` contiguous ranges and runs
// body(worker, begin, end) on each. Ranges depend only on (count, workers).
template <typename Body>
void parallel_for_workers(std::uint64_t count, unsigned workers, Body&& body) {
    if (workers <= 1) {
        body(0u, std::uint64_t{0}, count);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = count * w / workers;
        const std::uint64_t end = count * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
            try {
                body(w, begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

template <typename Body>
void parallel_for(std::uint64_t count, unsigned threads, Body&& body) {
    parallel_for_workers(count, effective_workers(count, threads),
                         [&](unsigned, std::uint64_t begin, std::uint64_t end) { body(begin, end); });
}

}  // namespace kronlab

#endif  // KRONLAB_PARALLEL_HPP_
