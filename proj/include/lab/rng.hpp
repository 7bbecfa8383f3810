#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace lab {

// Counter-based generator (Philox-4x32-10, Salmon et al. SC 2011).
// A draw is a pure function of (key, stream, counter), so disjoint streams
// can be consumed in any order, on any thread, with identical results.
//
// Layout of the 128-bit counter block:
//   word0..1  running draw counter (64 bits)
//   word2..3  stream id (64 bits)
// The 64-bit key carries the master seed.
class Philox {
public:
    Philox(std::uint64_t key, std::uint64_t stream, std::uint64_t counter = 0)
        : key_(key), stream_(stream) {
        seek(counter);
    }

    // Position the generator at the given draw index (units of u64 draws).
    void seek(std::uint64_t draw_index) {
        draw_ = draw_index;
        block_index_ = ~std::uint64_t{0};  // force regeneration
    }

    std::uint64_t next_u64() {
        const std::uint64_t block = draw_ >> 1;
        const unsigned phase = static_cast<unsigned>(draw_ & 1);
        if (block != block_index_) {
            generate_block(block);
        }
        ++draw_;
        return out_[phase];
    }

    // Uniform on [0,1) with 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1); safe as a log() argument.
    double next_open_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; always consumes exactly two u64 draws.
    double next_gaussian() {
        const double u1 = next_open_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Independent N(0,1) pair from the same two draws (full Box-Muller).
    std::array<double, 2> next_gaussian_pair() {
        const double u1 = next_open_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    std::uint64_t stream() const { return stream_; }

private:
    void generate_block(std::uint64_t block);

    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t draw_ = 0;
    std::uint64_t block_index_ = ~std::uint64_t{0};
    std::uint64_t out_[2] = {0, 0};
};

// Stream-id helpers. Purpose tags keep unrelated draws inside one trial on
// disjoint substreams of the same master seed.
namespace streams {
constexpr std::uint64_t kMatrixEntries = 0;
constexpr std::uint64_t kSubspaceFrame = 1;
constexpr std::uint64_t kStartVector = 2;
constexpr std::uint64_t kScalars = 3;

inline std::uint64_t id(std::uint64_t purpose, std::uint64_t trial) {
    return (purpose << 56) | (trial & 0x00FFFFFFFFFFFFFFull);
}
}  // namespace streams

}  // namespace lab
