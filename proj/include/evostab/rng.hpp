#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace evostab {

/// Seeded generator with distribution code owned by this project, so that
/// identical seeds give identical draws on every platform (libstdc++
/// distributions make no such promise).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    std::uint64_t next_u64() { return engine_(); }

    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % n);
    }

    std::vector<double> uniform_vector(std::size_t dim, double lo, double hi) {
        std::vector<double> v(dim);
        for (auto& c : v) c = uniform(lo, hi);
        return v;
    }

private:
    std::mt19937_64 engine_;
};

/// Stable per-item seed derivation (splitmix64 finalizer), so enlarging a
/// sample set keeps the prefix identical.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace evostab
