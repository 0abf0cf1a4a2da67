#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sphermean {

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Thrown when an input violates an operation's domain contract.
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw domain_error(what);
}

/// Deterministic 64-bit generator (splitmix64). All randomized phantoms and
/// sweeps draw from this so that a fixed seed reproduces runs byte for byte,
/// independent of the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

namespace detail {

inline int thread_cap() {
    if (const char* env = std::getenv("SPHERMEAN_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace detail

/// Runs body(i) for i in [0, count). Work is split into chunks whose layout
/// does not depend on the thread count, so any reduction the caller performs
/// per index stays deterministic. SPHERMEAN_THREADS caps the pool.
inline void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& body) {
    const int threads = std::min<std::int64_t>(detail::thread_cap(), count);
    if (threads <= 1 || count < 256) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::int64_t chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::int64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace sphermean
