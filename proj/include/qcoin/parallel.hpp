#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qcoin {

// QCOIN_THREADS overrides the worker count (default: all cores)
inline int worker_count() {
    if (const char* env = std::getenv("QCOIN_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? (int)hc : 1;
}

// Each index is processed exactly once and must write only its own slot, so
// results never depend on the worker count.
template <class F>
void parallel_for(long count, F&& f) {
    int workers = worker_count();
    if (workers <= 1 || count < 4) {
        for (long i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<long> next{0};
    auto run = [&] {
        for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) f(i);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

} // namespace qcoin
