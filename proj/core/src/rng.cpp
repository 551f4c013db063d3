// SPDX-License-Identifier: Apache-2.0
#include "bgwi/rng.hpp"

#include <cmath>

namespace bgwi
{
namespace
{
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept
{
    std::uint64_t const product = std::uint64_t{a} * std::uint64_t{b};
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

// SplitMix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
}  // namespace

auto Philox4x32::apply(counter_type ctr, key_type key) noexcept
    -> counter_type
{
    for (int round = 0; round < 10; ++round)
    {
        if (round > 0)
        {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_{seed}, stream_id_{stream_id}
{
}

void RngStream::refill() noexcept
{
    Philox4x32::counter_type const ctr{
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_id_),
        static_cast<std::uint32_t>(stream_id_ >> 32)};
    Philox4x32::key_type const key{static_cast<std::uint32_t>(seed_),
                                   static_cast<std::uint32_t>(seed_ >> 32)};
    auto const out = Philox4x32::apply(ctr, key);
    buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
    buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
    buffered_ = 2;
    ++block_;
}

auto RngStream::operator()() noexcept -> result_type
{
    if (buffered_ == 0)
    {
        this->refill();
    }
    return buffer_[2 - buffered_--];
}

double RngStream::uniform() noexcept
{
    constexpr double kScale = 0x1.0p-53;
    return (static_cast<double>((*this)() >> 11) + 0.5) * kScale;
}

double RngStream::exponential() noexcept
{
    return -std::log(this->uniform());
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) noexcept
{
    return mix64(master ^ mix64(salt));
}

}  // namespace bgwi
