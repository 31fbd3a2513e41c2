#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pslab {

/// Number of worker threads used by the evaluators (at least 1).
unsigned worker_count();

/// Overrides worker_count(); 0 restores the hardware default.
void set_worker_count(unsigned n);

/// Evaluates fn(i) for i in [0, n) on worker_count() threads and returns the
/// results indexed by i. Callers reduce the vector in index order, so the
/// combined result does not depend on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<T> out(n);
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace pslab
