#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lab {

// Run fn(t) for t in [0, trials) on a small pool. Callers write results into
// pre-sized per-trial slots, so the aggregate is identical for any thread
// count; the reduction happens after join, in index order.
template <typename F>
void parallel_trials(int trials, int threads, F&& fn) {
    if (trials <= 0) return;
    if (threads <= 1 || trials == 1) {
        for (int t = 0; t < trials; ++t) fn(t);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            const int t = next.fetch_add(1);
            if (t >= trials) break;
            try {
                fn(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min(threads, trials);
    pool.reserve(count);
    for (int k = 0; k < count; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lab
