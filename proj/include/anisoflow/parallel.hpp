#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace aniso {

/// Worker count: ANISOFLOW_WORKERS env var, else hardware concurrency.
/// Settable at runtime (the throughput benchmark forces 1).
inline int& worker_count() {
    static int n = [] {
        if (const char* e = std::getenv("ANISOFLOW_WORKERS")) {
            const int v = std::atoi(e);
            if (v >= 1) return v;
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc ? static_cast<int>(hc) : 1;
    }();
    return n;
}

/// Run fn(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker; outputs must go to disjoint locations so results are independent
/// of scheduling.
template <typename Fn>
inline void parallel_for(std::int64_t n, Fn&& fn) {
    const int nw = std::min<std::int64_t>(worker_count(), n);
    if (nw <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(nw);
    for (int w = 0; w < nw; ++w) {
        const std::int64_t lo = n * w / nw;
        const std::int64_t hi = n * (w + 1) / nw;
        threads.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

/// Deterministic, portable 64-bit generator (splitmix64). Substreams are
/// derived by mixing the seed with stream labels, so a cell's noise depends
/// only on its key, never on iteration order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Substream constructor: mixes each label into the state.
    Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) : state_(seed) {
        for (auto l : labels) state_ = mix(state_ ^ (l + 0x9e3779b97f4a7c15ULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1).
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (one value per call, cached pair).
    double next_normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = next_uniform();
        while (u1 <= 0.0) u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace aniso
