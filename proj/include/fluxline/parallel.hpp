#pragma once

// Deterministic parallel map: work items write to preassigned slots, so the
// result is independent of thread count and schedule.

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fluxline {

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads < 1) threads = 1;
    const unsigned hw = std::thread::hardware_concurrency();
    if (hw > 0 && static_cast<unsigned>(threads) > hw) threads = static_cast<int>(hw);
    if (threads == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace fluxline
