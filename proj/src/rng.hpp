#pragma once

#include <cstdint>

namespace berw {

/// SplitMix64 finalizer. Full-period bijective mixer on 64 bits; the standard
/// workhorse for counter-based streams and hash finalization.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Combine a key into a running 64-bit state. Used to build keyed
/// pseudorandom functions over small tuples: h = mix64(mix64(seed ^ C1) ^ k1) ...
inline std::uint64_t mix_combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Stateless keyed PRF: a 64-bit word determined by (seed, a, b, c).
inline std::uint64_t prf64(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c) {
    std::uint64_t h = mix64(seed);
    h = mix_combine(h, a);
    h = mix_combine(h, b);
    h = mix_combine(h, c);
    return h;
}

/// Derived per-run seed: a pure function of (master seed, run index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return prf64(master, 0x5eedULL, index, 0);
}

/// Sequential 64-bit generator (splitmix64 stream).
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Fair bit.
    bool next_bit() {
        if (bits_left_ == 0) {
            bit_word_ = next();
            bits_left_ = 64;
        }
        bool b = bit_word_ & 1;
        bit_word_ >>= 1;
        --bits_left_;
        return b;
    }

    /// Uniform double in (0, 1].
    double next_open_closed() {
        // 53-bit mantissa; shift into (0,1] by mapping 0 -> 2^53.
        std::uint64_t u = next() >> 11;
        return (static_cast<double>(u) + 1.0) * 0x1p-53;
    }

    /// Uniform in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // Rejection-free multiply-shift is fine at our scales; bias < 2^-53.
        return static_cast<std::uint64_t>(next_open_closed() * static_cast<double>(n)) % n;
    }

private:
    std::uint64_t state_;
    std::uint64_t bit_word_ = 0;
    int bits_left_ = 0;
};

} // namespace berw
