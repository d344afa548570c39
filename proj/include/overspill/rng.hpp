//---------------------------------------------------------------------------//
// Copyright 2026 The overspill authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file overspill/rng.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace overspill
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
 */
class Philox4x32
{
  public:
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static constexpr counter_type apply(counter_type ctr, key_type key)
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            auto lo0 = static_cast<std::uint32_t>(p0);
            auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            auto lo1 = static_cast<std::uint32_t>(p1);
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

//---------------------------------------------------------------------------//
//! SplitMix64 finalizer, used to derive cipher keys.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

//---------------------------------------------------------------------------//
enum class StreamPurpose : std::uint32_t
{
    Threshold = 1,    //!< unit exponential thresholds e(k)
    Environment = 2,  //!< environment event clocks
    Thinning = 3,     //!< acceptance uniforms for thinned environment events
};

/*!
 * Identifies one independent random stream.
 *
 * The cipher key is derived from (seed, debtor, purpose) and the counter
 * carries (path, draw index), so draws depend only on the key and never on
 * the order in which paths are processed.
 */
struct RngStreamKey
{
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
    std::uint32_t debtor = 0;
    StreamPurpose purpose = StreamPurpose::Threshold;
};

//---------------------------------------------------------------------------//
class RngStream
{
  public:
    explicit RngStream(RngStreamKey const& key) : path_(key.path)
    {
        std::uint64_t k = splitmix64(
            splitmix64(key.seed)
            ^ ((std::uint64_t{key.debtor} << 8)
               | static_cast<std::uint64_t>(key.purpose)));
        key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    }

    //! Raw 64 random bits.
    std::uint64_t next_u64()
    {
        if (slot_ == 2)
        {
            Philox4x32::counter_type ctr{static_cast<std::uint32_t>(block_),
                                         static_cast<std::uint32_t>(block_ >> 32),
                                         static_cast<std::uint32_t>(path_),
                                         static_cast<std::uint32_t>(path_ >> 32)};
            buffer_ = Philox4x32::apply(ctr, key_);
            ++block_;
            slot_ = 0;
        }
        auto lo = buffer_[2 * slot_];
        auto hi = buffer_[2 * slot_ + 1];
        ++slot_;
        return (std::uint64_t{hi} << 32) | lo;
    }

    //! Uniform on the open interval (0, 1).
    double uniform()
    {
        return (static_cast<double>(this->next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    //! Unit-rate exponential.
    double exponential() { return -std::log(this->uniform()); }

  private:
    Philox4x32::key_type key_{};
    std::uint64_t path_ = 0;
    std::uint64_t block_ = 0;
    std::size_t slot_ = 2;
    Philox4x32::counter_type buffer_{};
};

//---------------------------------------------------------------------------//
}  // namespace overspill
