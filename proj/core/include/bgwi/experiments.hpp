// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bgwi/experiments.hpp
//! Runners that compare exact tables and Monte Carlo samples with the
//! scaling-limit laws.
//!
//! Every runner reads its sizes and thresholds from a settings table whose
//! defaults encode the acceptance gates; a spec may override any known
//! setting (unknown names are rejected). Per-path random streams are keyed
//! by (derived stage seed, path index), so observed values do not depend on
//! the worker count.
//---------------------------------------------------------------------------//
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "laws.hpp"
#include "report.hpp"

namespace bgwi
{
//---------------------------------------------------------------------------//
class UnknownExperiment : public std::invalid_argument
{
  public:
    explicit UnknownExperiment(std::string const& id)
        : std::invalid_argument("unknown experiment '" + id + "'")
    {
    }
};

class InvalidSpec : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//---------------------------------------------------------------------------//
struct ExperimentSpec
{
    std::string id;
    //! Model parameters; experiment default when empty
    std::optional<StableFamilyParams> params;
    std::uint64_t seed{0};
    //! n values (k_max for tailfit, m values for counterexample); empty
    //! selects the experiment default
    std::vector<std::uint64_t> ladder;
    std::optional<std::uint64_t> paths;
    unsigned workers{1};
    //! Overrides of named sizes and thresholds
    std::map<std::string, double> settings;
};

//! A named file produced by a runner (plot-ready CSV)
struct Artifact
{
    std::string name;
    std::string content;
};

//! Runnable experiment ids, in gate order
std::vector<std::string> const& experiment_ids();

//! Default settings of an experiment (throws UnknownExperiment)
std::map<std::string, double> const& default_settings(std::string const& id);

//! Default ladder of an experiment
std::vector<std::uint64_t> const& default_ladder(std::string const& id);

//! Default path count (0 for purely exact experiments)
std::uint64_t default_paths(std::string const& id);

/*!
 * Run one experiment; metric failures are recorded, never thrown.
 *
 * "yaglom-exact" is accepted as an alias of "yaglom".
 */
ExperimentReport run_experiment(ExperimentSpec const& spec,
                                std::vector<Artifact>* artifacts = nullptr);

/*!
 * Run every experiment with default sizes.
 *
 * Only seed, workers and (if set) params are taken from the spec.
 */
std::vector<ExperimentReport>
run_all(ExperimentSpec const& spec, std::vector<Artifact>* artifacts = nullptr);

}  // namespace bgwi
