// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/errors.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bgwi
{
//! Population sizes, cumulative sums and walk values
using count_t = std::int64_t;

class InvalidParams : public std::invalid_argument
{
  public:
    explicit InvalidParams(std::string const& reason)
        : std::invalid_argument(reason)
    {
    }
};

class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

class Unsupported : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

//! A heavy-tail draw exceeded the hard cap; almost surely an rng pathology
class TailCapExceeded : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! 64-bit population arithmetic would wrap
class OverflowError : public std::overflow_error
{
  public:
    using std::overflow_error::overflow_error;
};

class NoBracket : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Deconvolution produced a negative first-return mass
class NegativeMass : public std::runtime_error
{
  public:
    NegativeMass(std::size_t n, double value)
        : std::runtime_error("negative first-return mass r[" + std::to_string(n)
                             + "] = " + std::to_string(value))
        , index(n)
    {
    }
    std::size_t index;
};

class IndexError : public std::out_of_range
{
  public:
    using std::out_of_range::out_of_range;
};

class MemoryBudgetExceeded : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class EmptySample : public std::invalid_argument
{
  public:
    EmptySample() : std::invalid_argument("empty sample") {}
};

}  // namespace bgwi
