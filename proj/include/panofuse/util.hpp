#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace panofuse {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thread count used by parallel_for when the caller passes 0.
int default_jobs();
void set_default_jobs(int jobs);

/// Runs fn(begin, end) over contiguous chunks of [0, n), possibly on several
/// threads. Writes performed by fn must target disjoint or order-independent
/// locations; chunk boundaries are deterministic for a given job count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn,
                  int jobs = 0);

/// Uniform double in [0, 1) with an explicit bit mapping, so sequences do not
/// depend on the standard library's distribution implementation.
inline double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * u01(rng);
}

/// splitmix64 — stateless integer hash used for procedural textures.
inline std::uint64_t hash64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline double hash_to_unit(std::uint64_t x) {
    return static_cast<double>(hash64(x) >> 11) * 0x1.0p-53;
}

double median(std::vector<double> values);
double percentile(std::vector<double> values, double pct);  // pct in [0, 100]

}  // namespace panofuse
