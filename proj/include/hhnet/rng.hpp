#pragma once

#include <cstdint>
#include <vector>

namespace hhnet {

// splitmix64 finalizer. Keys independent Monte Carlo streams off
// (seed, index...) tuples.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr uint64_t derive_stream(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = mix64(seed);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

// Counter-based uniform in [0,1): the draw for a given (stream, a, b) does
// not depend on evaluation order, which keeps parallel kernels bit-identical
// to the serial reference regardless of scheduling.
inline double uniform_at(uint64_t stream, uint64_t a, uint64_t b = 0) {
    return static_cast<double>(derive_stream(stream, a, b) >> 11) * 0x1.0p-53;
}

// Domain-separation salts for derived streams.
namespace salt {
inline constexpr uint64_t cascade_edge = 0x01;
inline constexpr uint64_t seed_mapping = 0x02;
inline constexpr uint64_t er_partition = 0x03;
inline constexpr uint64_t er_draw = 0x04;
inline constexpr uint64_t sweep_cell = 0x05;
}  // namespace salt

// Sequential splitmix64 generator, for shuffles and ad-hoc draws.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0,1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // uniform in [0, n), Lemire's multiply-then-reject
    uint64_t below(uint64_t n) {
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<uint64_t>(m);
        if (lo < n) {
            uint64_t t = -n % n;
            while (lo < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_;
};

// Execution policy for the data-parallel kernels. Both paths produce
// bit-identical results; the serial one is the reference implementation.
enum class Exec { serial, parallel };

}  // namespace hhnet
