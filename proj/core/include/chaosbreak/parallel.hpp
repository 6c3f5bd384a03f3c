#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace chaosbreak {

/// Worker cap for batch fan-out: CHAOS_BREAKER_THREADS when set (min 1), else 1.
inline unsigned thread_cap() {
    if (const char* env = std::getenv("CHAOS_BREAKER_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 1) {
            const unsigned hw = std::thread::hardware_concurrency();
            return hw ? std::min<unsigned>(static_cast<unsigned>(v), hw)
                      : static_cast<unsigned>(v);
        }
    }
    return 1;
}

/// Runs fn(i) for i in [0, n). Results must be written to per-index slots; the
/// iteration order is unspecified when more than one worker runs.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers = thread_cap();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace chaosbreak
