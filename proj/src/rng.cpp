#include "fracfp/rng.hpp"

#include <cmath>

namespace fracfp {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t step) {
    // counter layout: (stream lo, stream hi, step, block); step indices are
    // 32-bit in practice, the seed spans the key
    key_ = {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    base_ = {static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
             static_cast<std::uint32_t>(step ^ (step >> 32)), 0u};
}

std::uint32_t CounterRng::next_word() {
    if (buffered_ == 0) {
        std::array<std::uint32_t, 4> ctr = base_;
        ctr[3] = block_++;
        buffer_ = philox4x32(ctr, key_);
        buffered_ = 4;
    }
    return buffer_[4 - buffered_--];
}

double CounterRng::uniform() {
    const std::uint64_t hi = next_word();
    const std::uint64_t lo = next_word();
    const std::uint64_t bits = (hi << 21) ^ lo;  // 53 effective bits
    return (static_cast<double>(bits & ((1ull << 53) - 1)) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    cached_normal_ = rad * std::sin(ang);
    has_cached_normal_ = true;
    return rad * std::cos(ang);
}

}  // namespace fracfp
