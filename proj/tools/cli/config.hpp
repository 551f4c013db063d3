// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file cli/config.hpp
//! Run configuration: sectioned key=value file plus command-line overrides.
//!
//!   [model]       alpha, c, d, family (pure_power | log_perturbed), cprime
//!   [experiment]  id, ladder (comma list), paths, setting.<name>
//!   [run]         seed, workers, out, format (json | csv | text)
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <bgwi/experiments.hpp>
#include <bgwi/laws.hpp>
#include <bgwi/report.hpp>

namespace bgwi::cli
{
//---------------------------------------------------------------------------//
class ParseError : public std::runtime_error
{
  public:
    ParseError(std::size_t line, std::string const& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what)
        , line_{line}
    {
    }
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class UnknownKey : public std::invalid_argument
{
  public:
    explicit UnknownKey(std::string const& name)
        : std::invalid_argument("unknown configuration key '" + name + "'")
        , name_{name}
    {
    }
    std::string const& name() const noexcept { return name_; }

  private:
    std::string name_;
};

//---------------------------------------------------------------------------//
//! Values given on the command line; unset fields keep the file value
struct Overrides
{
    std::optional<std::string> experiment;
    std::optional<double> alpha;
    std::optional<double> c;
    std::optional<double> d;
    std::optional<double> cprime;
    std::optional<std::string> family;
    std::optional<std::vector<std::uint64_t>> ladder;
    std::optional<std::uint64_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::map<std::string, double> settings;
};

struct RunConfig
{
    //! Empty when the experiment's canonical parameters apply
    std::optional<StableFamilyParams> params;
    std::string experiment;
    std::vector<std::uint64_t> ladder{1000, 10000};
    //! False when ladder holds the configuration default; runners then use
    //! their own gate ladder
    bool ladder_set{false};
    std::optional<std::uint64_t> paths;
    std::uint64_t seed{0};
    unsigned workers{1};
    std::string out;
    ReportFormat format{ReportFormat::json};
    std::map<std::string, double> settings;

    ExperimentSpec to_spec() const;
};

//! Parse "1e3,10000,3e4" into integers (throws std::invalid_argument)
std::vector<std::uint64_t> parse_ladder(std::string const& text);

/*!
 * Build a validated configuration.
 *
 * Unknown keys raise UnknownKey, malformed lines or values ParseError,
 * inconsistent model parameters InvalidParams. An empty output directory
 * falls back to BGWILAB_OUT, then to "bgwilab-out".
 */
RunConfig parse_config(std::string const& contents, Overrides const& overrides);

}  // namespace bgwi::cli
