#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hk {

/// Environment variable consulted when no explicit worker count is given.
/// Worker count only affects wall time, never results.
inline constexpr const char* kThreadsEnvVar = "HK_THREADS";

/// Resolves a worker count: explicit request > HK_THREADS > hardware cores.
inline unsigned resolve_worker_count(unsigned requested = 0) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv(kThreadsEnvVar)) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed > 0) {
            return static_cast<unsigned>(parsed);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs body(index) for every index in [0, count) across the given number of
/// workers. Indices are handed out in chunks via an atomic counter; callers
/// guarantee determinism by writing results into per-index slots and reducing
/// in index order afterwards.
template <typename F>
void parallel_for(std::uint64_t count, unsigned workers, F&& body) {
    if (count == 0) {
        return;
    }
    workers = std::max(1u, workers);
    if (workers == 1 || count == 1) {
        for (std::uint64_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    const std::uint64_t chunk = std::max<std::uint64_t>(1, count / (workers * 16));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::uint64_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
            if (begin >= count) {
                return;
            }
            const std::uint64_t end = std::min(count, begin + chunk);
            for (std::uint64_t i = begin; i < end; ++i) {
                body(i);
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawned = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, count));
    pool.reserve(spawned);
    for (unsigned t = 0; t < spawned; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
}

} // namespace hk
