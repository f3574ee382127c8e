#pragma once

#include <array>
#include <cstdint>

namespace fracfp {

/// Philox4x32-10 block function (counter-based, splittable).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Deterministic per-(seed, stream, step) random stream. Streams are
/// independent of evaluation order and worker count; particle simulations key
/// them by (particle index, step index).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t step);

    /// Uniform in the open interval (0, 1).
    double uniform();
    /// Standard normal via Box-Muller (pairs cached).
    double normal();

private:
    std::uint32_t next_word();
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> base_;
    std::uint32_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace fracfp
