#include "hypercone/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hypercone {

int worker_count() {
    static const int count = [] {
        int hw = static_cast<int>(std::thread::hardware_concurrency());
        if (hw < 1) hw = 1;
        if (const char* env = std::getenv("HYPERCONE_THREADS")) {
            const int cap = std::atoi(env);
            if (cap >= 1) hw = std::min(hw, cap);
        }
        return hw;
    }();
    return count;
}

void parallel_chunks(std::uint64_t total,
                     const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
    if (total == 0) return;
    const int workers = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(worker_count()), total));
    if (workers <= 1) {
        fn(0, 0, total);
        return;
    }
    const std::uint64_t chunk = (total + static_cast<std::uint64_t>(workers) - 1) /
                                static_cast<std::uint64_t>(workers);
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const std::uint64_t b = static_cast<std::uint64_t>(w) * chunk;
        const std::uint64_t e = std::min(total, b + chunk);
        if (b >= e) break;
        threads.emplace_back([&fn, w, b, e] { fn(w, b, e); });
    }
    for (auto& t : threads) t.join();
}

} // namespace hypercone
