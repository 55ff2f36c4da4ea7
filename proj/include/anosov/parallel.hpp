#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace anosov {

// 0 means "use the hardware concurrency".
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.  Work is handed out
// in contiguous chunks; callers write results into per-index slots so the
// outcome does not depend on scheduling.
inline void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn) {
    threads = std::max(1, std::min<int>(resolve_threads(threads), static_cast<int>(std::max<size_t>(n, 1))));
    if (threads == 1 || n < 64) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    const size_t chunk = std::max<size_t>(1, n / (static_cast<size_t>(threads) * 8));
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        while (!failed) {
            size_t start = next.fetch_add(chunk);
            if (start >= n) break;
            size_t stop = std::min(n, start + chunk);
            try {
                for (size_t i = start; i < stop; ++i) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace anosov
