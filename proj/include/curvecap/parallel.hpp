#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace curvecap {

inline int default_threads() {
    unsigned h = std::thread::hardware_concurrency();
    return h ? static_cast<int>(h) : 1;
}

// Run fn(i) for i in [0, n). Work items must be independent; the first
// exception (by item index) is rethrown after all workers drain.
template <class F>
void parallel_for(size_t n, int threads, F&& fn) {
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    size_t nw = std::min(static_cast<size_t>(threads), n);
    std::atomic<size_t> next{0};
    std::mutex err_mutex;
    size_t err_index = n;
    std::exception_ptr err;
    auto worker = [&] {
        size_t i;
        while ((i = next.fetch_add(1)) < n) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (size_t w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

// First argmax of value(i) over [0, n): the smallest index attaining the
// maximum. The result does not depend on the thread count.
template <class V>
std::pair<double, size_t> parallel_argmax(size_t n, int threads, V&& value) {
    if (n == 0) return {0.0, 0};
    size_t nchunks = std::max<size_t>(1, std::min<size_t>(static_cast<size_t>(std::max(threads, 1)) * 4, n));
    std::vector<std::pair<double, size_t>> best(nchunks, {0.0, n});
    size_t chunk = (n + nchunks - 1) / nchunks;
    parallel_for(nchunks, threads, [&](size_t c) {
        size_t lo = c * chunk, hi = std::min(n, lo + chunk);
        double bv = 0.0;
        size_t bi = n;
        for (size_t i = lo; i < hi; ++i) {
            double v = value(i);
            if (bi == n || v > bv) {
                bv = v;
                bi = i;
            }
        }
        best[c] = {bv, bi};
    });
    double bv = 0.0;
    size_t bi = n;
    for (const auto& [v, i] : best) {
        if (i == n) continue;
        if (bi == n || v > bv) {
            bv = v;
            bi = i;
        }
    }
    return {bv, bi};
}

} // namespace curvecap
