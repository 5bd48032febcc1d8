// Deterministic chunked parallel map-reduce over an index range.
//
// Each chunk produces a partial result; partials are combined in chunk
// order, so any reduction (even a floating-point one) is independent of
// the thread schedule.

#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qd {

inline unsigned default_threads() {
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : h;
}

// fn(begin, end) -> T over disjoint subranges of [lo, hi); combine in order.
template <class T, class Fn, class Combine>
T parallel_reduce(std::int64_t lo, std::int64_t hi, T init, Fn fn, Combine combine,
                  unsigned threads = 0) {
    if (threads == 0) threads = default_threads();
    std::int64_t total = hi - lo;
    if (total <= 0) return init;
    if (threads == 1 || total < 2) {
        T part = fn(lo, hi);
        return combine(std::move(init), std::move(part));
    }
    std::int64_t nchunk = std::min<std::int64_t>(total, 4 * threads);
    std::vector<T> partials(static_cast<std::size_t>(nchunk), init);
    std::vector<std::thread> pool;
    std::int64_t per = total / nchunk, extra = total % nchunk;
    std::int64_t at = lo;
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
    for (std::int64_t c = 0; c < nchunk; ++c) {
        std::int64_t len = per + (c < extra ? 1 : 0);
        ranges.emplace_back(at, at + len);
        at += len;
    }
    std::size_t next = 0;
    std::mutex mu;
    std::exception_ptr error;
    auto worker = [&] {
        for (;;) {
            std::size_t c;
            {
                std::lock_guard<std::mutex> g(mu);
                if (next >= ranges.size() || error) return;
                c = next++;
            }
            try {
                partials[c] = fn(ranges[c].first, ranges[c].second);
            } catch (...) {
                std::lock_guard<std::mutex> g(mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    T acc = std::move(init);
    for (auto& p : partials) acc = combine(std::move(acc), std::move(p));
    return acc;
}

}  // namespace qd
