#pragma once

#include <array>
#include <cstdint>

namespace cirmax {

// Philox4x32-10 counter-based generator. A (counter, key) cell maps to 128
// output bits through 10 rounds of 32x32 multiply-xor mixing, so streams can
// be addressed by (seed, path, step) with no sequential state to carry.
struct Philox4x32 {
    using ctr_t = std::array<std::uint32_t, 4>;
    using key_t = std::array<std::uint32_t, 2>;

    static ctr_t block(ctr_t x, key_t k) {
        for (int r = 0; r < 10; ++r) {
            if (r) {
                k[0] += 0x9E3779B9u;
                k[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * x[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * x[2];
            x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k[0],
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k[1],
                 static_cast<std::uint32_t>(p0)};
        }
        return x;
    }
};

// UniformRandomBitGenerator view of the cell addressed by (seed, path, step).
// Successive draws walk the block index, so a cell can feed any number of
// variates without touching neighbouring cells; results are independent of
// how paths are partitioned across threads.
class PhiloxStream {
public:
    using result_type = std::uint64_t;

    PhiloxStream(std::uint64_t seed, std::uint64_t path, std::uint32_t step)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          base_{static_cast<std::uint32_t>(path),
                static_cast<std::uint32_t>(path >> 32), step, 0} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
        if (idx_ == 2) {
            auto c = base_;
            c[3] = blk_++;
            const auto out = Philox4x32::block(c, key_);
            buf_[0] = (std::uint64_t{out[0]} << 32) | out[1];
            buf_[1] = (std::uint64_t{out[2]} << 32) | out[3];
            idx_ = 0;
        }
        return buf_[idx_++];
    }

private:
    Philox4x32::key_t key_;
    Philox4x32::ctr_t base_;
    std::uint32_t blk_ = 0;
    std::array<std::uint64_t, 2> buf_{};
    int idx_ = 2;
};

} // namespace cirmax
