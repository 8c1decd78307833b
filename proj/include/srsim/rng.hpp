#pragma once

#include <cstdint>
#include <random>

#include "srsim/constellation.hpp"

namespace srsim {

/// splitmix64 step; used to mix seeds for derived streams.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic random stream. Streams derived via split() are independent
/// of each other and of the parent's subsequent output, which keeps chunked
/// parallel runs reproducible for any worker count.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(mix64(seed)), seed_(seed) {}

    /// Derive an independent child stream keyed by (seed, key).
    RngStream split(std::uint64_t key) const {
        return RngStream(mix64(seed_ ^ mix64(key + 0x51ed2701a3b9e4d7ULL)));
    }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
    }

    double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

    /// CN(0,1): circularly symmetric complex Gaussian, unit variance.
    cplx cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return cplx(re * 0.7071067811865476, im * 0.7071067811865476);
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::uint64_t seed_;
};

}  // namespace srsim
