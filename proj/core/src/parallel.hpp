#ifndef BLOCHLAB_SRC_PARALLEL_HPP
#define BLOCHLAB_SRC_PARALLEL_HPP

#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace blochlab::detail {

/// Worker count: hardware concurrency capped by BLOCHLAB_THREADS (>= 1).
inline size_t worker_count() {
    size_t hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("BLOCHLAB_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<size_t>(cap) < hw) hw = static_cast<size_t>(cap);
    }
    return hw;
}

/// Splits [0, count) into contiguous ranges, reduces each on its own thread
/// and merges partials in range order. The merge order is fixed, so results
/// are identical for any worker count as long as `merge` is associative or
/// order-insensitive (max-style reductions here are both).
template <typename State, typename RangeFn, typename MergeFn>
State parallel_range_reduce(size_t count, State init, RangeFn per_range, MergeFn merge) {
    const size_t workers = std::min(worker_count(), std::max<size_t>(count / 2048, 1));
    if (workers <= 1 || count < 4096) {
        State s = init;
        per_range(0, count, s);
        return s;
    }
    std::vector<State> partials(workers, init);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const size_t chunk = (count + workers - 1) / workers;
    for (size_t w = 0; w < workers; ++w) {
        const size_t begin = w * chunk;
        const size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            try {
                if (begin < end) per_range(begin, end, partials[w]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    State out = init;
    for (const auto& p : partials) merge(out, p);
    return out;
}

}  // namespace blochlab::detail

#endif
