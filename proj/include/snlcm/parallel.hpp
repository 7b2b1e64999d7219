#ifndef SNLCM_PARALLEL_HPP
#define SNLCM_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace snlcm {

/// Run fn(0), ..., fn(count-1) across a worker pool. Callers keep results
/// deterministic by writing to per-index slots; merge order never matters.
inline void parallel_for(uint64_t count, unsigned workers,
                         const std::function<void(uint64_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    workers = std::min<unsigned>(workers, std::thread::hardware_concurrency());
    if (workers <= 1) workers = 2;
    std::atomic<uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const uint64_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace snlcm

#endif
