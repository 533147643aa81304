// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace uavrelay {

// Philox4x32-10 counter-based generator.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;
    static Counter block(Counter ctr, Key key) noexcept;
};

// A reproducible stream of uniforms addressed by (seed, stream id). Two streams with
// different ids never share a counter value, so chunks can be drawn in any order.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;
    // Uniform on the open interval (0, 1).
    double uniform() noexcept;

private:
    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t index_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

}  // namespace uavrelay
