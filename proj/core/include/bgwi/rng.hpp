// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/rng.hpp
//! Counter-based random streams keyed by (master seed, stream id).
//---------------------------------------------------------------------------//
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bgwi
{
//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 block function.
 *
 * Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits. The map
 * is stateless, so any (key, counter) pair can be evaluated independently.
 */
struct Philox4x32
{
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static counter_type apply(counter_type ctr, key_type key) noexcept;
};

//---------------------------------------------------------------------------//
/*!
 * A single reproducible random stream.
 *
 * The stream id occupies the upper half of the Philox counter and the block
 * index the lower half, so streams with distinct ids never overlap. Streams
 * are cheap to construct; simulations create one per path keyed by the path
 * index so results do not depend on how paths are scheduled.
 *
 * Satisfies UniformRandomBitGenerator, so it can drive <random>
 * distributions directly.
 */
class RngStream
{
  public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    //! Uniform on the open interval (0, 1) with 53 bits of resolution
    double uniform() noexcept;

    //! Unit-mean exponential
    double exponential() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    //! Number of 64-bit words consumed so far
    std::uint64_t position() const noexcept { return 2 * block_ - buffered_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_{0};
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_{0};

    void refill() noexcept;
};

//---------------------------------------------------------------------------//
//! Derive a child seed (e.g. per experiment stage) from a master seed
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) noexcept;

}  // namespace bgwi
