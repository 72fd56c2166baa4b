#ifndef HYPERMET_PARALLEL_HPP
#define HYPERMET_PARALLEL_HPP

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace hypermet {

/// Number of worker threads for quadruple scans.  HYPERMET_THREADS caps the
/// default (hardware concurrency); values below 1 are treated as 1.
inline unsigned scan_threads() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("HYPERMET_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && v <= 1024) n = static_cast<unsigned>(v);
    }
    return n;
}

// Runs work(i, state) for i in [0, n), striping outer indices across threads
// (worker t handles i = t, t+T, ...).  Each worker owns a private copy of
// `init`; the per-worker states are merged with `merge`, which must be a
// commutative, associative reduction so the result does not depend on the
// partition.
template <class State, class Work, class Merge>
State striped_reduce(std::size_t n, unsigned threads, State init, Work work, Merge merge) {
    if (threads <= 1 || n < 2) {
        State s = init;
        for (std::size_t i = 0; i < n; ++i) work(i, s);
        return s;
    }
    if (threads > n) threads = static_cast<unsigned>(n);
    std::vector<State> states(threads, init);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            State& s = states[t];
            for (std::size_t i = t; i < n; i += threads) work(i, s);
        });
    }
    for (auto& th : pool) th.join();
    State out = init;
    for (const State& s : states) merge(out, s);
    return out;
}

}  // namespace hypermet

#endif  // HYPERMET_PARALLEL_HPP
