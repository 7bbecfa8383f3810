#include "lab/rng.hpp"

namespace lab {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(product);
    hi = static_cast<std::uint32_t>(product >> 32);
}

inline void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mul_hi_lo(kPhiloxM4x32A, ctr[0], lo0, hi0);
    mul_hi_lo(kPhiloxM4x32B, ctr[2], lo1, hi1);
    const std::uint32_t r0 = hi1 ^ ctr[1] ^ key[0];
    const std::uint32_t r1 = lo1;
    const std::uint32_t r2 = hi0 ^ ctr[3] ^ key[1];
    const std::uint32_t r3 = lo0;
    ctr[0] = r0;
    ctr[1] = r1;
    ctr[2] = r2;
    ctr[3] = r3;
}

}  // namespace

void Philox::generate_block(std::uint64_t block) {
    std::uint32_t ctr[4] = {
        static_cast<std::uint32_t>(block),
        static_cast<std::uint32_t>(block >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32),
    };
    std::uint32_t key[2] = {
        static_cast<std::uint32_t>(key_),
        static_cast<std::uint32_t>(key_ >> 32),
    };
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, key);
        key[0] += kPhiloxW32A;
        key[1] += kPhiloxW32B;
    }
    out_[0] = (static_cast<std::uint64_t>(ctr[1]) << 32) | ctr[0];
    out_[1] = (static_cast<std::uint64_t>(ctr[3]) << 32) | ctr[2];
    block_index_ = block;
}

}  // namespace lab
