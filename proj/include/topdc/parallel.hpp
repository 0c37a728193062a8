#pragma once

// Index-parallel loop. Each index is processed exactly once and results are
// written by index, so output never depends on the worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace topdc {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
    static std::atomic<unsigned> n{0};
    return n;
}
inline bool& inside_worker() {
    thread_local bool flag = false;
    return flag;
}
} // namespace detail

/// 0 selects std::thread::hardware_concurrency().
inline void set_thread_count(unsigned n) { detail::thread_setting() = n; }

inline unsigned thread_count() {
    const unsigned n = detail::thread_setting();
    if (n != 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Reads TOPDC_THREADS (0 or unset = auto).
inline void configure_threads_from_env() {
    if (const char* s = std::getenv("TOPDC_THREADS")) {
        try {
            set_thread_count(static_cast<unsigned>(std::stoul(s)));
        } catch (const std::exception&) {
            set_thread_count(0);
        }
    }
}

/// Calls fn(i) for i in [0, n). Nested calls from a worker run serially.
/// The first exception thrown by any fn is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1 || detail::inside_worker()) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        detail::inside_worker() = true;
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
        detail::inside_worker() = false;
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

} // namespace topdc
