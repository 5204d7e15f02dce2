// Small shared helpers: seeded RNG streams, a parallel-for, logging, CSV numbers.
#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tilecache {

// splitmix64 finalizer; also used to derive independent substreams from one seed.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t substream(uint64_t seed, uint64_t stream) { return mix64(seed ^ mix64(stream)); }

// Counter-based splitmix64 generator. Deterministic across platforms, unlike
// the std:: distributions, which keeps scenario generation byte-reproducible.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() { return mix64(state_++); }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    int uniform_int(int n) {
        if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
        return static_cast<int>(next_u64() % static_cast<uint64_t>(n));
    }

    // index sampled from a (normalized) pmf
    int sample_pmf(const std::vector<double>& pmf) {
        double r = uniform();
        double acc = 0.0;
        for (size_t i = 0; i < pmf.size(); ++i) {
            acc += pmf[i];
            if (r < acc) return static_cast<int>(i);
        }
        return static_cast<int>(pmf.size()) - 1;
    }

private:
    uint64_t state_;
};

// Runs fn(0..n-1) on up to `threads` worker threads. Results must be written to
// per-index slots; the function itself must not touch shared mutable state.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

// Verbosity from TILECACHE_LOG (0 = quiet, 1 = info, 2 = debug).
int log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

// Fixed formatting for CSV/JSON-adjacent output so identical runs are byte-identical.
std::string fmt_double(double v);

}  // namespace tilecache
