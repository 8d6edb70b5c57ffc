#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sstp {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
///
/// A pure function of (counter, key); the stream types below build
/// reproducible, independently addressable random streams on top of it.
class Philox4x32
{
  public:
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static constexpr counter_type encrypt(counter_type ctr, key_type key) noexcept
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            std::uint64_t const p0 = std::uint64_t{kMul0} * ctr[0];
            std::uint64_t const p1 = std::uint64_t{kMul1} * ctr[2];
            auto const hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto const lo0 = static_cast<std::uint32_t>(p0);
            auto const hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto const lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// A random stream addressed by (seed, stream_index, substream).
///
/// The 64-bit seed is the cipher key; the counter holds the 64-bit stream
/// index, a 32-bit substream id, and a 32-bit block counter. Two streams
/// with distinct addresses never share a cipher block, so per-trajectory
/// streams are independent of how trajectories are scheduled.
///
/// Satisfies std::uniform_random_bit_generator.
class RandomStream
{
  public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream_index, std::uint32_t substream = 0) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
        , stream_lo_{static_cast<std::uint32_t>(stream_index)}
        , stream_hi_{static_cast<std::uint32_t>(stream_index >> 32)}
        , substream_{substream}
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        if (cursor_ == 2)
        {
            refill();
        }
        return buffer_[cursor_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint32_t blocks_consumed() const noexcept { return block_; }

  private:
    void refill() noexcept
    {
        auto const out = Philox4x32::encrypt({block_, substream_, stream_lo_, stream_hi_}, key_);
        ++block_;
        buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
        buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
        cursor_ = 0;
    }

    Philox4x32::key_type key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint32_t substream_;
    std::uint32_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int cursor_ = 2;
};

}  // namespace sstp
