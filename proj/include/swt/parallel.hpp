#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace swt {

// Index-parallel loop with deterministic output responsibility left to the
// caller (write to preallocated slots). First exception wins and is rethrown
// on the calling thread after join.
template <typename Fn>
inline void parallel_for(int n, int threads, Fn&& fn) {
    threads = std::clamp(threads, 1, std::max(1, n));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            try {
                for (int i = next.fetch_add(1); i < n && !stop.load(); i = next.fetch_add(1))
                    fn(i);
            } catch (...) {
                stop.store(true);
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    for (std::thread& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace swt
