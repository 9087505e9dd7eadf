// rng.hpp
// Seeded, cross-platform-reproducible randomness.

#pragma once

#include <cstdint>
#include <random>

namespace qpac {

// std::mt19937_64's raw output stream is fully specified by the standard, but
// the std <random> distributions are not. All sampling goes through the
// samplers below so that identical seeds give identical streams everywhere.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0,1), 53 random bits.
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform on {0,...,n-1} (Lemire's bounded sampler, unbiased).
    std::uint64_t next_below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    int uniform_int(int n) { return static_cast<int>(next_below(static_cast<std::uint64_t>(n))); }

  private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-trial seed derivation: trials seeded this way give identical results
// whether run serially or on concurrent workers.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

}  // namespace qpac
