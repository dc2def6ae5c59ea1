#pragma once

#include <cstdint>

namespace coxnorm {

// Deterministic generator with identical output on every platform; the
// standard <random> distributions are implementation-defined, which would
// break byte-for-byte reproducibility of suite output.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    // splitmix64 step
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d4a2fcf39609a5ULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double unif() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double unif(double lo, double hi) { return lo + (hi - lo) * unif(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }
};

// Stable per-trial seed derivation: one master seed fans out to independent
// streams without overlapping splitmix64 sequences in practice.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    Rng r(master ^ (0x6a09e667f3bcc909ULL + stream * 0x3c6ef372fe94f82bULL));
    r.next_u64();
    return r.next_u64();
}

}  // namespace coxnorm
